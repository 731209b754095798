import cmath
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpoisson.expansions import ParamsMismatch, QExpansion
from fpoisson.measure import FpmParams
from fpoisson.spaces import NormParams, Sign, dist_norm
from fpoisson.transforms import s_transform
from fpoisson.wick import (
    WickDomainError,
    wick_exp,
    wick_exp_by_powers,
    wick_inverse,
    wick_log,
    wick_power,
    wick_product,
)

part = st.floats(-0.5, 0.5, allow_nan=False)
qexp = st.lists(st.builds(complex, part, part), min_size=1, max_size=8).map(QExpansion)
positive_mean = st.tuples(st.floats(0.3, 2.0), qexp).map(
    lambda t: QExpansion([t[0]] + list(t[1].coeffs[1:]))
)


def diff(a, b, n=None):
    n = n or max(len(a.coeffs), len(b.coeffs))
    return max(abs(x - y) for x, y in zip(a.padded(n), b.padded(n)))


def sample_points(rng, count=10, radius=0.3):
    return [cmath.rect(rng.uniform(0, radius), rng.uniform(0, 6.3)) for _ in range(count)]


def test_units():
    b = QExpansion([1, 2j, -0.5])
    assert wick_product(QExpansion.unit(0), b).coeffs == b.coeffs
    assert wick_product(QExpansion.unit(1), QExpansion.unit(1)).coeffs == QExpansion.unit(2).coeffs
    assert len(wick_product(QExpansion([1, 1, 1]), QExpansion([1, 1])).coeffs) == 4


def test_params_mismatch():
    a = QExpansion([1], FpmParams(1, 1))
    b = QExpansion([1], FpmParams(1, 0.5))
    with pytest.raises(ParamsMismatch):
        wick_product(a, b)
    assert wick_product(a, QExpansion([2])).params == FpmParams(1, 1)


@given(qexp, qexp)
def test_s_homomorphism(a, b):
    ab = wick_product(a, b)
    for z in sample_points(random.Random(len(a.coeffs)), radius=0.6):
        assert abs(s_transform(ab, z) - s_transform(a, z) * s_transform(b, z)) <= 1e-10


@given(qexp, qexp, qexp)
def test_ring_laws(a, b, c):
    assert diff(wick_product(a, b), wick_product(b, a)) <= 1e-12
    assert diff(wick_product(wick_product(a, b), c), wick_product(a, wick_product(b, c))) <= 1e-12
    assert diff(wick_product(a, b + c), wick_product(a, b) + wick_product(a, c)) <= 1e-12


@given(qexp, st.integers(0, 6))
def test_power(a, n):
    if n == 0:
        assert wick_power(a, 0).coeffs == (1,)
    if n == 1:
        assert wick_power(a, 1).coeffs == a.coeffs
    p = wick_power(a, n)
    for z in sample_points(random.Random(n)):
        assert abs(s_transform(p, z) - s_transform(a, z) ** n) <= 1e-9


def test_power_rejects_negative():
    with pytest.raises(ValueError):
        wick_power(QExpansion([1]), -1)


def test_exp_of_zero_is_unit():
    e = wick_exp(QExpansion([0]), 6)
    assert e.coeffs == (1, 0, 0, 0, 0, 0)


@given(qexp, qexp)
def test_exp_is_a_homomorphism(a, b):
    lhs = wick_product(wick_exp(a, 12), wick_exp(b, 12))
    assert diff(lhs, wick_exp(a + b, 12), 12) <= 1e-9


@given(positive_mean)
def test_log_inverts_exp(a):
    assert diff(wick_log(wick_exp(a, 12), 12), a, 12) <= 1e-9
    assert diff(wick_exp(wick_log(a, 12), 12), a, 12) <= 1e-9


def test_log_of_unit_is_zero():
    assert all(c == 0 for c in wick_log(QExpansion.unit(0), 5).coeffs)


def test_domain_errors():
    with pytest.raises(WickDomainError):
        wick_log(QExpansion([-1, 1]), 4)
    with pytest.raises(WickDomainError):
        wick_log(QExpansion([1j, 1]), 4)
    with pytest.raises(WickDomainError):
        wick_inverse(QExpansion([0, 1]), 4)
    with pytest.raises(ValueError):
        wick_exp(QExpansion([1]), 0)


def test_inverse_of_unit():
    assert wick_inverse(QExpansion.unit(0), 4).coeffs == (1, 0, 0, 0)


@given(qexp.filter(lambda q: abs(q.coeffs[0]) > 0.2))
def test_inverse(a):
    prod = wick_product(a, wick_inverse(a, 12))
    assert diff(prod, QExpansion.unit(0), 12) <= 1e-9


@given(qexp)
def test_exp_matches_power_series_route(a):
    assert diff(wick_exp(a, 10), wick_exp_by_powers(a, 10), 10) <= 1e-12


@given(positive_mean)
def test_s_homomorphism_for_series_operations(a):
    rng = random.Random(1)
    n = 40
    for z in sample_points(rng, 5, radius=0.2):
        s = s_transform(a, z)
        assert abs(s_transform(wick_exp(a, n), z) - cmath.exp(s)) <= 1e-9 * abs(cmath.exp(s))
        assert abs(s_transform(wick_log(a, n), z) - cmath.log(s)) <= 1e-9
        assert abs(s_transform(wick_inverse(a, n), z) - 1 / s) <= 1e-9 * abs(1 / s)


@pytest.mark.parametrize("p,q", [(0, 0), (1, 2)])
def test_norm_inequality(p, q):
    rng = random.Random(p * 10 + q)
    r = p + q + 1
    for _ in range(50):
        a = QExpansion([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(rng.randint(1, 10))])
        b = QExpansion([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(rng.randint(1, 10))])
        lhs = dist_norm(wick_product(a, b), NormParams(r, 1, Sign.DISTRIBUTION))
        rhs = dist_norm(a, NormParams(q, 1, Sign.DISTRIBUTION)) * dist_norm(
            b, NormParams(p, 1, Sign.DISTRIBUTION)
        )
        assert lhs <= rhs * (1 + 1e-12)  # equality for length-one factors

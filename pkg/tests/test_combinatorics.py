import itertools
import math
import random

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpoisson.combinatorics import (
    bell_index_sequences,
    bell_partial,
    binomial,
    falling_factorial,
    falling_factorial_coeffs,
    stirling_first,
    stirling_first_row,
    stirling_second,
    stirling_second_row,
)


def _cycle_count(perm):
    seen, cycles = set(), 0
    for start in range(len(perm)):
        if start in seen:
            continue
        cycles += 1
        i = start
        while i not in seen:
            seen.add(i)
            i = perm[i]
    return cycles


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def _compositions(n, k):
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0, *cuts, n)
        yield [bounds[i + 1] - bounds[i] for i in range(k)]


def test_base_cases():
    assert stirling_first(0, 0) == 1
    assert stirling_second(0, 0) == 1
    assert stirling_first(3, 5) == 0
    assert stirling_second(3, 5) == 0
    assert stirling_first(5, 0) == 0
    assert all(stirling_second(n, 1) == 1 for n in range(1, 20))


def test_first_kind_by_cycle_enumeration():
    n = 4
    counts = [0] * (n + 1)
    for perm in itertools.permutations(range(n)):
        counts[_cycle_count(perm)] += 1
    for k in range(n + 1):
        assert stirling_first(n, k) == (-1) ** (n - k) * counts[k]
    assert stirling_first(4, 2) == 11


def test_second_kind_by_partition_enumeration():
    for n in range(1, 7):
        counts = [0] * (n + 1)
        for part in _set_partitions(list(range(n))):
            counts[len(part)] += 1
        assert [stirling_second(n, k) for k in range(n + 1)] == counts
    assert stirling_second(4, 2) == 7


def test_orthogonality_exact_to_30():
    for n in range(31):
        for k in range(31):
            total = sum(stirling_first(n, j) * stirling_second(j, k) for j in range(k, n + 1))
            assert total == (n == k)


@pytest.mark.parametrize("n", range(1, 13))
def test_composition_sums(n):
    # k! s(n,k) and k! S(n,k) by Faa di Bruno over compositions of n
    log_derivs = {l: (-1) ** (l - 1) * math.factorial(l - 1) for l in range(1, n + 1)}
    for k in range(1, n + 1):
        a = b = 0
        for comp in _compositions(n, k):
            multinom = math.factorial(n) // math.prod(math.factorial(l) for l in comp)
            a += multinom * math.prod(log_derivs[l] for l in comp)
            b += multinom
        assert a == math.factorial(k) * stirling_first(n, k)
        assert b == math.factorial(k) * stirling_second(n, k)


def test_rows_match_entries():
    for n in range(15):
        assert stirling_first_row(n) == tuple(stirling_first(n, k) for k in range(n + 1))
        assert stirling_second_row(n) == tuple(stirling_second(n, k) for k in range(n + 1))


def test_bell_partial_trivial_cases():
    assert bell_partial(0, 0, ()) == 1
    for n in range(1, 8):
        assert bell_partial(n, n, (3,)) == 3**n


@pytest.mark.parametrize("n", range(13))
def test_bell_partial_ones_give_stirling_second(n):
    for k in range(n + 1):
        args = (1,) * (n - k + 1)
        assert bell_partial(n, k, args) == stirling_second(n, k)


def test_bell_partial_length_mismatch():
    with pytest.raises(ValueError):
        bell_partial(4, 2, (1, 1))


def test_bell_index_sequences_constraints():
    for n in range(9):
        for k in range(n + 1):
            for js in bell_index_sequences(n, k):
                assert sum(js) == k
                assert sum((i + 1) * j for i, j in enumerate(js)) == n


def test_falling_factorial_values():
    assert falling_factorial(2.5 + 1j, 0) == 1
    assert falling_factorial(3, 3) == 6
    assert falling_factorial(3, 4) == 0


@pytest.mark.parametrize("n", range(13))
def test_falling_factorial_expansions(n):
    assert falling_factorial_coeffs(n) == tuple(stirling_first(n, k) for k in range(n + 1))
    rng = random.Random(n)
    with mpmath.workdps(50):
        for _ in range(5):
            y = mpmath.mpc(rng.uniform(-3, 3), rng.uniform(-3, 3))
            ff = falling_factorial(y, n)
            via_s = mpmath.fsum(stirling_first(n, k) * y**k for k in range(n + 1))
            assert abs(ff - via_s) <= 1e-12 * abs(ff)
            power = mpmath.fsum(stirling_second(n, k) * falling_factorial(y, k) for k in range(n + 1))
            assert abs(power - y**n) <= 1e-12 * abs(y) ** n


@given(st.integers(0, 60), st.integers(0, 60))
def test_first_kind_recurrence(n, k):
    lhs = stirling_first(n + 1, k + 1)
    assert lhs == stirling_first(n, k) - n * stirling_first(n, k + 1)


@given(st.integers(0, 60), st.integers(0, 60))
def test_second_kind_recurrence(n, k):
    lhs = stirling_second(n + 1, k + 1)
    assert lhs == (k + 1) * stirling_second(n, k + 1) + stirling_second(n, k)


@given(st.integers(0, 40))
def test_row_sums(n):
    # sum_k |s(n,k)| = n!, sum_k S(n,k) = Bell number, checked via recurrence
    assert sum(abs(stirling_first(n, k)) for k in range(n + 1)) == math.factorial(n)
    bell = [1]
    for m in range(n):
        bell.append(sum(binomial(m, j) * bell[j] for j in range(m + 1)))
    assert sum(stirling_second(n, k) for k in range(n + 1)) == bell[n]

"""Wick calculus on Q-expansions.

The S-transform turns the Wick product into pointwise multiplication, so on
Q-coefficients the product is a Cauchy convolution.  Exponential, logarithm
and inverse apply the usual truncated power-series recurrences to the Taylor
coefficients of the S-image, then map back with `s_inverse`.  Because
w = e^z - 1 = z + O(z^2), the first n Taylor coefficients in z and the first
n Q-coefficients determine each other, so truncating to `n_terms` on either
side is the same thing.
"""

from __future__ import annotations

import cmath
import math

from .expansions import QExpansion, TaylorSeries, common_params
from .transforms import s_inverse, taylor_of_s

__all__ = [
    "WickDomainError",
    "wick_product",
    "wick_power",
    "wick_exp",
    "wick_log",
    "wick_inverse",
    "wick_exp_by_powers",
]


class WickDomainError(ValueError):
    """The expectation Phi_0 is outside the domain of the operation."""


def _convolve(a, b, length=None):
    n = len(a) + len(b) - 1 if length is None else length
    out = [0j] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for j, y in enumerate(b[: n - i]):
            out[i + j] += x * y
    return out


def wick_product(a: QExpansion, b: QExpansion) -> QExpansion:
    """Theta_n = sum_k Phi_k Psi_{n-k}; length len(a) + len(b) - 1."""
    params = common_params(a.params, b.params)
    return QExpansion(_convolve(a.coeffs, b.coeffs), params)


def wick_power(a: QExpansion, n: int) -> QExpansion:
    """a^{<>n} by repeated squaring; n = 0 gives the unit Q_0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    result = QExpansion.unit(0, a.params)
    base = a
    while n:
        if n & 1:
            result = wick_product(result, base)
        n >>= 1
        if n:
            base = wick_product(base, base)
    return result


def _check_terms(n_terms: int) -> None:
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")


def _series_exp(u):
    out = [cmath.exp(u[0])]
    for n in range(1, len(u)):
        out.append(sum(k * u[k] * out[n - k] for k in range(1, n + 1)) / n)
    return out


def _series_log(u):
    out = [cmath.log(u[0])]
    for n in range(1, len(u)):
        acc = u[n] - sum(k * out[k] * u[n - k] for k in range(1, n)) / n
        out.append(acc / u[0])
    return out


def _series_reciprocal(u):
    out = [1 / u[0]]
    for n in range(1, len(u)):
        out.append(-sum(u[k] * out[n - k] for k in range(1, n + 1)) / u[0])
    return out


def _via_taylor(a: QExpansion, n_terms: int, op) -> QExpansion:
    u = taylor_of_s(a, n_terms)
    image = TaylorSeries(op(list(u.coeffs)), u.trust_radius)
    return QExpansion(s_inverse(image).coeffs, a.params)


def wick_exp(a: QExpansion, n_terms: int) -> QExpansion:
    """exp^<>(a), first n_terms Q-coefficients."""
    _check_terms(n_terms)
    return _via_taylor(a, n_terms, _series_exp)


def wick_log(a: QExpansion, n_terms: int) -> QExpansion:
    """log^<>(a), first n_terms Q-coefficients.  Needs Phi_0 = E(a) > 0."""
    _check_terms(n_terms)
    phi0 = a.coeffs[0]
    if phi0.imag != 0 or not phi0.real > 0:
        raise WickDomainError(f"Wick logarithm needs a real positive expectation, got {phi0}")
    return _via_taylor(a, n_terms, _series_log)


def wick_inverse(a: QExpansion, n_terms: int) -> QExpansion:
    """a^{<>-1}, first n_terms Q-coefficients.  Needs Phi_0 = E(a) != 0."""
    _check_terms(n_terms)
    if a.coeffs[0] == 0:
        raise WickDomainError("Wick inverse needs a nonzero expectation")
    return _via_taylor(a, n_terms, _series_reciprocal)


def wick_exp_by_powers(a: QExpansion, n_terms: int, n_powers: int = 60) -> QExpansion:
    """sum_{n < n_powers} a^{<>n} / n!, truncated to n_terms coefficients.
    The slow route, kept for cross-checking `wick_exp`."""
    _check_terms(n_terms)
    total = [0j] * n_terms
    power = [1 + 0j] + [0j] * (n_terms - 1)
    for n in range(n_powers):
        for i in range(n_terms):
            total[i] += power[i] / math.factorial(n)
        power = _convolve(power, a.coeffs, n_terms)
    return QExpansion(total, a.params)

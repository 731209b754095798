"""The dual Appell system Q_k and the pairing <<phi, Phi>>.

Q_k is a distribution, so it never exists pointwise here.  It acts on a
polynomial through

    <<phi, Q_m>> = integral of (Delta^m phi) d pi,

and a generalized function is a finite coefficient sequence against the Q_k,
paired with C-expansions by <<phi, Phi>> = sum_k k! phi_k Phi_k.

All integrals of polynomials are dot products with the moment cache, carried
out in mpmath and rounded once.
"""

from __future__ import annotations

import math
from typing import Sequence

import mpmath

from .combinatorics import falling_factorial, stirling_first, stirling_second
from .expansions import CExpansion, ParamsMismatch, QExpansion
from .measure import FpmParams, MomentCache
from .polynomials import (
    Poly,
    _check_cache,
    _derivative_list,
    _difference_list,
    _gen_appell_exact,
    _mul_list,
)

__all__ = [
    "expectation",
    "q_action",
    "q_action_stirling",
    "int_deriv_c",
    "dual_pair",
    "project_to_q",
    "delta_z",
    "rho",
    "first_kind_factor",
]


def _integrate(coeffs: Sequence, cache: MomentCache):
    """sum_n coeffs[n] M(n) in mpmath."""
    cache.require(len(coeffs) - 1)
    return mpmath.fsum(mpmath.mpmathify(c) * m for c, m in zip(coeffs, cache.moments_mp))


def _mp_coeffs(p: Poly) -> list:
    if p.exact is not None:
        return [mpmath.mpmathify(c) for c in p.exact]
    return [mpmath.mpc(c) for c in p.coeffs]


def expectation(p: Poly, params: FpmParams, cache: MomentCache) -> complex:
    """Integral of p against pi: sum_n p_n M(n)."""
    _check_cache(params, cache)
    with mpmath.workdps(cache.dps):
        return complex(_integrate(_mp_coeffs(p), cache))


def q_action(m: int, p: Poly, params: FpmParams, cache: MomentCache) -> complex:
    """<<p, Q_m>> = integral of Delta^m p."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    _check_cache(params, cache)
    with mpmath.workdps(cache.dps):
        return complex(_integrate(_difference_list(_mp_coeffs(p), m), cache))


def q_action_stirling(m: int, p: Poly, params: FpmParams, cache: MomentCache) -> complex:
    """<<p, Q_m>> as m! sum_{k>=m} S(k,m)/k! integral of p^{(k)}."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    _check_cache(params, cache)
    with mpmath.workdps(cache.dps):
        coeffs = _mp_coeffs(p)
        total = mpmath.mpf(0)
        for k in range(m, len(coeffs)):
            w = mpmath.mpf(math.factorial(m) * stirling_second(k, m)) / math.factorial(k)
            total += w * _integrate(_derivative_list(coeffs, k), cache)
        return complex(total)


def int_deriv_c(n: int, k: int, params: FpmParams, cache: MomentCache) -> complex:
    """Integral of the k-th derivative of C_n.  Should equal k! s(n, k)."""
    _check_cache(params, cache)
    if k > n:
        return 0j
    with mpmath.workdps(cache.dps):
        cn = _gen_appell_exact(cache, n)[n]
        return complex(_integrate(_derivative_list(cn, k), cache))


def dual_pair(e: CExpansion, q: QExpansion) -> complex:
    """<<phi, Phi>> = sum_k k! phi_k Phi_k over the common length."""
    if q.params is not None and q.params != e.params:
        raise ParamsMismatch(f"pairing {e.params} with {q.params}")
    with mpmath.workdps(30):
        total = mpmath.fsum(
            math.factorial(k) * mpmath.mpc(a) * mpmath.mpc(b)
            for k, (a, b) in enumerate(zip(e.coeffs, q.coeffs))
        )
    return complex(total)


def project_to_q(p: Poly, params: FpmParams, cache: MomentCache, n_max: int) -> QExpansion:
    """Phi_k = (1/k!) integral of C_k p, k <= n_max.

    For beta < 1 this expansion is infinite even for polynomial p (the C_k are
    not orthogonal), so the caller picks the truncation.  Needs moments up to
    n_max + deg p.
    """
    _check_cache(params, cache)
    deg = max(p.degree, 0)
    cache.require(n_max + deg)
    with mpmath.workdps(cache.dps):
        pc = _mp_coeffs(p)
        fam = _gen_appell_exact(cache, n_max)
        out = [
            _integrate(_mul_list(fam[k], pc), cache) / math.factorial(k) for k in range(n_max + 1)
        ]
        return QExpansion([complex(v) for v in out], params)


def delta_z(z: complex, params: FpmParams, n_max: int, cache: MomentCache) -> QExpansion:
    """Point evaluation at z: coefficients C_n(z)/n!, n <= n_max."""
    _check_cache(params, cache)
    with mpmath.workdps(cache.dps):
        zm = mpmath.mpc(z)
        fam = _gen_appell_exact(cache, n_max)
        out = [mpmath.polyval(list(reversed(fam[n])), zm) / math.factorial(n) for n in range(n_max + 1)]
        return QExpansion([complex(v) for v in out], params)


def rho(z: complex, params: FpmParams | None, n_max: int) -> QExpansion:
    """rho(z, .): coefficients (-z)_k / k!, k <= n_max.

    Pairs as <<phi, rho(z, .)>> = integral of phi(x - z), and
    <<C_n, rho(z, .)>> = (-z)_n.  The first argument is the shift itself, so
    rho(-w, ...) has coefficients (w)_k / k!.
    """
    with mpmath.workdps(30):
        w = -mpmath.mpc(z)
        out = [falling_factorial(w, k) / math.factorial(k) for k in range(n_max + 1)]
        return QExpansion([complex(v) for v in out], params)


def first_kind_factor(n: int, k: int) -> int:
    """k! s(n, k), the value int_deriv_c is checked against."""
    return math.factorial(k) * stirling_first(n, k) if k <= n else 0

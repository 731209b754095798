"""S- and C-transforms.

On Q-expansions the S-transform is the polynomial sum_n Phi_n (e^z - 1)^n in
w = e^z - 1, and on C-expansions the C-transform is sum_n phi_n (z)_n.  Both
are also available as direct sums against pi_{lambda,beta}.

Passing between Q-coefficients and the Taylor coefficients of the S-image
uses Stirling numbers:

    (e^z - 1)^n = n! sum_k S(k, n) z^k / k!      (taylor_of_s)
    log(1 + w)^k = k! sum_n s(n, k) w^n / n!      (s_inverse)

Both maps run in exact rational arithmetic on the binary values of the
input, so their composition is the identity up to the final rounding.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import mpmath

from .combinatorics import falling_factorial, stirling_first, stirling_second
from .expansions import DEFAULT_TRUST_RADIUS, CExpansion, QExpansion, TaylorSeries
from .measure import FpmParams, build_moment_cache, laplace_transform, sum_over_support
from .polynomials import Poly, PolyFamily, _reciprocal_constants, c_basis_to_monomial, poly_eval

__all__ = [
    "s_transform",
    "s_transform_direct",
    "c_transform",
    "c_transform_direct",
    "s_inverse",
    "taylor_of_s",
    "s_image_radius",
]


def s_transform(q: QExpansion, z: complex) -> complex:
    """(S Phi)(z) = sum_n Phi_n (e^z - 1)^n, by Horner in w = e^z - 1."""
    z = complex(z)
    w = 2 * cmath.exp(z / 2) * cmath.sinh(z / 2)  # e^z - 1 without cancellation near 0
    acc = 0j
    for c in reversed(q.coeffs):
        acc = acc * w + c
    return acc


def s_transform_direct(p: Poly, params: FpmParams, z: complex, tail_tol: float = 1e-15) -> complex:
    """(S p)(z) = sum_k p(k) e^{zk} pi({k}) / l(z)."""
    z = complex(z)
    num = sum_over_support(params, lambda k: poly_eval(p, k), tail_tol, log_weight=lambda k: z * k)
    return num / laplace_transform(params, z)


def c_transform(e: CExpansion, z: complex) -> complex:
    """(C phi)(z) = sum_n phi_n (z)_n."""
    z = complex(z)
    total = 0j
    ff = 1 + 0j
    for n, c in enumerate(e.coeffs):
        total += c * ff
        ff *= z - n
    return total


def c_transform_direct(
    e: CExpansion, family: PolyFamily, z: complex, tail_tol: float = 1e-15
) -> complex:
    """(C phi)(z) = sum_k phi(k + z) pi({k}) with phi rebuilt in monomials."""
    phi = c_basis_to_monomial(e, family)
    z = complex(z)
    return sum_over_support(e.params, lambda k: poly_eval(phi, k + z), tail_tol)


def _split(c: complex) -> tuple[Fraction, Fraction]:
    return Fraction(c.real), Fraction(c.imag)


def _join(re: Fraction, im: Fraction) -> complex:
    return complex(float(re), float(im))


def s_inverse(u: TaylorSeries) -> QExpansion:
    """Q-coefficients of the generalized function whose S-transform has
    Taylor coefficients u: Phi_n = (1/n!) sum_{k<=n} k! s(n, k) u_k."""
    parts = [_split(c) for c in u.coeffs]
    out = []
    for n in range(len(parts)):
        re = im = Fraction(0)
        for k in range(n + 1):
            w = math.factorial(k) * stirling_first(n, k)
            if w:
                re += w * parts[k][0]
                im += w * parts[k][1]
        f = math.factorial(n)
        out.append(_join(re / f, im / f))
    return QExpansion(out)


def taylor_of_s(q: QExpansion, n_terms: int, trust_radius: float = DEFAULT_TRUST_RADIUS) -> TaylorSeries:
    """First n_terms Taylor coefficients of S(Phi):
    u_k = (1/k!) sum_{n<=k} Phi_n n! S(k, n)."""
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    parts = [_split(c) for c in q.coeffs]
    out = []
    for k in range(n_terms):
        re = im = Fraction(0)
        for n in range(min(k, len(parts) - 1) + 1):
            w = math.factorial(n) * stirling_second(k, n)
            if w:
                re += w * parts[n][0]
                im += w * parts[n][1]
        f = math.factorial(k)
        out.append(_join(re / f, im / f))
    return TaylorSeries(out, trust_radius)


def s_image_radius(params: FpmParams, order: int = 120) -> float:
    """Root-test estimate of the radius R of convergence, in w = e^z - 1, of
    sum_n Phi_n w^n for Q-projections of polynomials.

    That series is the Taylor expansion of (integral of (1+w)^x p(x)) / E_beta(lambda w),
    so R is the modulus of the zero of E_beta(lambda w) closest to the origin
    (infinite at beta = 1, where the estimate just keeps growing with
    `order`).  Truncated projections reproduce the direct S-transform only
    where |e^z - 1| < R.
    """
    cache = build_moment_cache(params, order, dps=80)
    with mpmath.workdps(80):
        g = _reciprocal_constants(cache.tilde_mp, order)
        tail = range(order - 10, order + 1)
        return float(
            min(abs(g[m] / mpmath.factorial(m)) ** (-mpmath.mpf(1) / m) for m in tail if g[m] != 0)
        )

"""Dense polynomials and the two Appell families attached to pi_{lambda,beta}.

A_n are the coefficients of e^{zx} / l(z) and C_n (generalized Appell) those
of e^{x log(1+z)} / E_beta(lambda z).  Both are built from moment sequences
through partial Bell polynomials:

    A_n(x) = sum_k C(n,k) a_{n-k} x^k,      a_m = sum_i (-1)^i i! B_{m,i}(M(1), ...)
    C_n(x) = sum_k C(n,k) c_{n-k} (x)_k,    c_m = sum_i (-1)^i i! B_{m,i}(M~(1), ...)

Construction runs in mpmath at the moment cache's precision; coefficients are
rounded to complex doubles once at the end.
"""

from __future__ import annotations

import cmath
import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath

from .combinatorics import (
    bell_partial,
    binomial,
    stirling_first,
    stirling_first_row,
    stirling_second,
)
from .expansions import CExpansion, ParamsMismatch
from .measure import FpmParams, MomentCache, build_moment_cache
from .mittag_leffler import ml_eval

__all__ = [
    "Poly",
    "Kind",
    "PolyFamily",
    "poly_eval",
    "build_appell",
    "build_gen_appell",
    "build_family",
    "gen_appell_via_p1",
    "monomial_to_c_basis",
    "c_basis_to_monomial",
    "check_p3",
    "check_p4",
    "derivative",
    "difference",
    "difference_stirling",
    "appell_bound_constants",
]


def _trim(coeffs: Sequence) -> list:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out or [0]


@dataclass(frozen=True)
class Poly:
    """Polynomial sum_k coeffs[k] x^k over complex doubles.

    Trailing zeros are dropped, so ``degree`` is exact; the zero polynomial
    is ``Poly((0,))`` with degree -1.  Family members also carry the
    high-precision coefficients they were rounded from in ``exact``; integrals
    against the moment cache use those, since the rounded coefficients can
    cancel badly.  Arithmetic on Poly drops ``exact``.
    """

    coeffs: tuple
    exact: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in _trim(self.coeffs)))
        if self.exact is not None:
            object.__setattr__(self, "exact", tuple(_trim(self.exact)))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    def __call__(self, z):
        return poly_eval(self, z)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (n - len(self.coeffs))
        b = other.coeffs + (0j,) * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scaled(-1)

    def __mul__(self, other: "Poly") -> "Poly":
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    def scaled(self, c: complex) -> "Poly":
        return Poly([c * a for a in self.coeffs])

    def max_imag(self) -> float:
        return max(abs(c.imag) for c in self.coeffs)

    @classmethod
    def monomial(cls, n: int) -> "Poly":
        return cls([0] * n + [1])


def poly_eval(p: Poly, z: complex) -> complex:
    """Horner evaluation."""
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


class Kind(str, enum.Enum):
    APPELL = "A"
    GEN_APPELL = "C"


@dataclass(frozen=True)
class PolyFamily:
    """P_0, ..., P_{n_max} of one kind.  `exact` keeps the mpmath
    coefficients the rounded `polys` were made from."""

    params: FpmParams
    kind: Kind
    polys: tuple
    exact: tuple

    def __post_init__(self):
        for n, p in enumerate(self.polys):
            if p.degree != n:
                raise ValueError(f"member {n} has degree {p.degree}")
            if abs(p.coeffs[-1] - 1) > 1e-12:
                raise ValueError(f"member {n} is not monic")

    @property
    def n_max(self) -> int:
        return len(self.polys) - 1

    def __getitem__(self, n: int) -> Poly:
        return self.polys[n]

    def require(self, n: int) -> None:
        if n > self.n_max:
            raise ValueError(f"family covers n <= {self.n_max}, need {n}")


# -- generic coefficient-list helpers (any ring: float, complex, mpmath) ----


# partitions of m grow like exp(pi sqrt(2m/3)); past this order the Bell
# enumeration gives way to the reciprocal-series recurrence
BELL_LIMIT = 20


def _bell_constants(values: Sequence, n_max: int) -> list:
    """sum_i (-1)^i i! B_{m,i}(values[1], ..., values[m-i+1]) for m <= n_max.

    These are the Taylor coefficients (times m!) of 1 / sum_j values[j] z^j / j!.
    Orders above BELL_LIMIT are continued by `_reciprocal_constants`.
    """
    out = []
    for m in range(min(n_max, BELL_LIMIT) + 1):
        if m == 0:
            out.append(1)
            continue
        total = 0
        # B_{m,0} vanishes for m > 0
        for i in range(1, m + 1):
            total += (-1) ** i * math.factorial(i) * bell_partial(m, i, values[1 : m - i + 2])
        out.append(total)
    return _reciprocal_constants(values, n_max, out)


def _reciprocal_constants(values: Sequence, n_max: int, start: Sequence = (1,)) -> list:
    """Same constants from g_m = -sum_{j=1}^m C(m,j) values[j] g_{m-j}, the
    coefficient recurrence of g = 1/f for exponential generating functions."""
    out = list(start)
    for m in range(len(out), n_max + 1):
        out.append(-sum(binomial(m, j) * values[j] * out[m - j] for j in range(1, m + 1)))
    return out


def _falling_to_monomial(falling: Sequence) -> list:
    """Monomial coefficients of sum_k falling[k] (x)_k."""
    out = [0] * len(falling)
    for k, f in enumerate(falling):
        if f == 0:
            continue
        for j, s in enumerate(stirling_first_row(k)):
            if s:
                out[j] += f * s
    return out


def _derivative_list(coeffs: Sequence, k: int) -> list:
    if k >= len(coeffs):
        return [0]
    return [coeffs[d] * math.perm(d, k) for d in range(k, len(coeffs))]


def _shift_list(coeffs: Sequence, a: int) -> list:
    """Coefficients of p(x + a) for integer a."""
    n = len(coeffs)
    out = [0] * n
    for d, c in enumerate(coeffs):
        if c == 0:
            continue
        for i in range(d + 1):
            out[i] += c * binomial(d, i) * a ** (d - i)
    return out


def _difference_list(coeffs: Sequence, k: int) -> list:
    """Coefficients of the k-th forward difference, one step at a time.

    A single step maps c to sum_{d>i} C(d, i) c_d, so the degree drops
    exactly; the alternating binomial form cancels badly in floating point.
    """
    out = list(coeffs)
    for _ in range(k):
        if len(out) <= 1:
            return [0]
        out = [
            sum(binomial(d, i) * out[d] for d in range(i + 1, len(out)))
            for i in range(len(out) - 1)
        ]
    return out


def _mul_list(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _round(coeffs: Sequence) -> Poly:
    return Poly([complex(c) for c in coeffs], exact=tuple(coeffs))


# -- families ----------------------------------------------------------------


@functools.lru_cache(maxsize=128)
def _appell_exact(cache: MomentCache, n_max: int) -> tuple:
    cache.require(n_max)
    with mpmath.workdps(cache.dps):
        a = _bell_constants(cache.moments_mp, n_max)
        return tuple(
            tuple(binomial(n, k) * a[n - k] for k in range(n + 1)) for n in range(n_max + 1)
        )


@functools.lru_cache(maxsize=128)
def _gen_appell_exact(cache: MomentCache, n_max: int) -> tuple:
    cache.require(n_max)
    with mpmath.workdps(cache.dps):
        c = _bell_constants(cache.tilde_mp, n_max)
        return tuple(
            tuple(_falling_to_monomial([binomial(n, k) * c[n - k] for k in range(n + 1)]))
            for n in range(n_max + 1)
        )


def _check_cache(params: FpmParams, cache: MomentCache) -> None:
    if cache.params != params:
        raise ParamsMismatch(f"moment cache is for {cache.params}, not {params}")


def build_appell(params: FpmParams, n: int, cache: MomentCache) -> Poly:
    """A_n by the Bell-polynomial closed form over raw moments."""
    _check_cache(params, cache)
    return _round(_appell_exact(cache, n)[n])


def build_gen_appell(params: FpmParams, n: int, cache: MomentCache) -> Poly:
    """C_n by the Bell-polynomial closed form over M~, assembled in the
    falling-factorial basis."""
    _check_cache(params, cache)
    return _round(_gen_appell_exact(cache, n)[n])


@functools.lru_cache(maxsize=64)
def build_family(params: FpmParams, kind: Kind | str, n_max: int) -> PolyFamily:
    """Family of kind A or C up to degree n_max, with its own moment cache."""
    kind = Kind(kind)
    cache = build_moment_cache(params, n_max)
    exact = (_appell_exact if kind is Kind.APPELL else _gen_appell_exact)(cache, n_max)
    return PolyFamily(params, kind, tuple(_round(c) for c in exact), exact)


def gen_appell_via_p1(params: FpmParams, n: int, cache: MomentCache) -> Poly:
    """C_n = sum_m s(n, m) A_m."""
    _check_cache(params, cache)
    appell = _appell_exact(cache, n)
    with mpmath.workdps(cache.dps):
        out = [0] * (n + 1)
        for m in range(n + 1):
            s = stirling_first(n, m)
            if s:
                for j, a in enumerate(appell[m]):
                    out[j] += s * a
    return _round(out)


def _c_coeffs_of_monomial(n: int, moments: Sequence) -> list:
    # x^n = sum_m [sum_k C(n,k) S(k,m) M(n-k)] C_m
    return [
        sum(binomial(n, k) * stirling_second(k, m) * moments[n - k] for k in range(m, n + 1))
        for m in range(n + 1)
    ]


def monomial_to_c_basis(p: Poly, family: PolyFamily, cache: MomentCache) -> CExpansion:
    """Coefficients phi with p = sum_m phi_m C_m."""
    _check_cache(family.params, cache)
    deg = max(p.degree, 0)
    family.require(deg)
    cache.require(deg)
    with mpmath.workdps(cache.dps):
        out = [mpmath.mpc(0)] * (deg + 1)
        for n, c in enumerate(p.coeffs):
            if c == 0:
                continue
            cm = mpmath.mpc(c)
            for m, w in enumerate(_c_coeffs_of_monomial(n, cache.moments_mp)):
                out[m] += cm * w
        return CExpansion(family.params, [complex(v) for v in out])


def c_basis_to_monomial(e: CExpansion, family: PolyFamily) -> Poly:
    """sum_n phi_n C_n as a monomial-basis polynomial."""
    if e.params != family.params:
        raise ParamsMismatch(f"expansion is for {e.params}, family for {family.params}")
    family.require(len(e) - 1)
    with mpmath.workdps(30):
        out = [mpmath.mpc(0)] * len(e)
        for n, phi in enumerate(e.coeffs):
            if phi == 0:
                continue
            ph = mpmath.mpc(phi)
            for j, c in enumerate(family.exact[n]):
                out[j] += ph * c
    return _round(out)


# -- identities ----------------------------------------------------------------


def check_p3(params: FpmParams, n: int, x: complex, y: complex, cache: MomentCache) -> float:
    """|C_n(x+y) - sum_{k+l+m=n} n!/(k! l! m!) C_k(x) C_l(y) M~(m)|."""
    _check_cache(params, cache)
    fam = _family_from_cache(cache, n)
    cx = [poly_eval(p, x) for p in fam]
    cy = [poly_eval(p, y) for p in fam]
    rhs = 0j
    for k in range(n + 1):
        for l in range(n - k + 1):
            m = n - k - l
            w = math.factorial(n) // (math.factorial(k) * math.factorial(l) * math.factorial(m))
            rhs += w * cx[k] * cy[l] * cache.tilde[m]
    return abs(poly_eval(fam[n], x + y) - rhs)


def check_p4(params: FpmParams, n: int, x: complex, y: complex, cache: MomentCache) -> float:
    """|C_n(x+y) - sum_k C(n,k) C_k(x) (y)_{n-k}|."""
    _check_cache(params, cache)
    fam = _family_from_cache(cache, n)
    rhs = 0j
    for k in range(n + 1):
        ff = 1
        for i in range(n - k):
            ff *= y - i
        rhs += binomial(n, k) * poly_eval(fam[k], x) * ff
    return abs(poly_eval(fam[n], x + y) - rhs)


def _family_from_cache(cache: MomentCache, n: int) -> list:
    return [_round(c) for c in _gen_appell_exact(cache, n)]


# -- operators -------------------------------------------------------------------


def derivative(p: Poly, k: int) -> Poly:
    """k-th derivative."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return Poly(_derivative_list(p.coeffs, k))


def difference(p: Poly, k: int) -> Poly:
    """k-fold forward difference (Delta f)(x) = f(x+1) - f(x)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return Poly(_difference_list(p.coeffs, k))


def difference_stirling(p: Poly, k: int) -> Poly:
    """Delta^k p as k! sum_{n>=k} S(n,k)/n! p^{(n)}, a finite sum on
    polynomials."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = Poly((0,))
    for n in range(k, len(p.coeffs)):
        w = math.factorial(k) * stirling_second(n, k) / math.factorial(n)
        out = out + derivative(p, n).scaled(w)
    return out


def appell_bound_constants(
    params: FpmParams, eps: float, n_grid: int = 64, safety: float = 1.05
) -> tuple[float, float]:
    """(C_eps, sigma_eps) with |C_n(x)| <= C_eps n! sigma_eps^{-n} e^{eps |x|}.

    On |z| = sigma = 1 - e^{-eps} one has |log(1+z)| <= eps, and the
    generating function of C_n there is (1+z)^x / E_beta(lambda z).  The
    Cauchy estimate needs E_beta(lambda z) zero-free on the closed disc,
    which is checked through its winding number on the circle.
    """
    if not 0 < eps <= 0.6:
        raise ValueError("eps must lie in (0, 0.6]")
    sigma = -math.expm1(-eps)
    vals = [
        ml_eval(params.beta, params.lam * sigma * cmath.exp(2j * math.pi * j / n_grid))
        for j in range(n_grid)
    ]
    turns = 0.0
    for a, b in zip(vals, vals[1:] + vals[:1]):
        turns += cmath.phase(b / a)
    if abs(turns) > math.pi:
        raise ValueError(
            f"E_beta(lambda z) vanishes inside |z| <= {sigma:.4g}; no Cauchy bound at eps={eps}"
        )
    return safety * max(1.0 / abs(v) for v in vals), sigma

"""The fractional Poisson measure pi_{lambda,beta} on the nonnegative
integers: point masses, Laplace transform, moments.

    pi({k}) = lambda^k / k! * E_beta^{(k)}(-lambda)

At beta = 1 this is the Poisson distribution.  Sums over the support are
truncated with a certified geometric tail bound (see `sum_over_support`).
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field
from typing import Callable

import gmpy2
import mpmath

from .combinatorics import stirling_second
from .mittag_leffler import ConvergenceError, MlConfig, ml_derivative_hp, ml_eval

__all__ = [
    "FpmParams",
    "MomentCache",
    "pmf",
    "log_pmf",
    "laplace_transform",
    "laplace_transform_direct",
    "moment",
    "moment_oracle",
    "tilde_moment",
    "exp_moment",
    "sum_over_support",
    "build_moment_cache",
    "default_dps",
]

# series at large k (pmf) or small beta (Laplace transform) need many terms
SERIES_CONFIG = MlConfig(rel_tol=1e-17, max_terms=50_000)
DEFAULT_TAIL_TOL = 1e-15
MAX_SUPPORT = 5000


@dataclass(frozen=True)
class FpmParams:
    lam: float
    beta: float

    def __post_init__(self):
        lam = float(self.lam)
        beta = float(self.beta)
        if not (lam > 0 and math.isfinite(lam)):
            raise ValueError(f"lambda must be a positive finite number, got {self.lam}")
        if not 0.0 < beta <= 1.0:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "beta", beta)

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "beta": self.beta}


# (lam, beta) -> {k: log2 pi({k})}, used only to pick starting precisions
_log2_seen: dict[tuple[float, float], dict[int, float]] = {}


def _log2_deriv_hint(lam: float, beta: float, k: int) -> float | None:
    seen = _log2_seen.get((lam, beta), {})
    if k - 1 not in seen:
        return None
    step = seen[k - 1] - seen[k - 2] if k - 2 in seen else 0.0
    log2_pmf = seen[k - 1] + step
    # pi({k}) = lam^k / k! E^{(k)}(-lam)
    return log2_pmf + (math.lgamma(k + 1) - k * math.log(lam)) / math.log(2)


@functools.lru_cache(maxsize=8192)
def _pmf_mpfr(lam: float, beta: float, k: int):
    hint = _log2_deriv_hint(lam, beta, k)
    deriv = ml_derivative_hp(beta, k, -lam, SERIES_CONFIG, log2_hint=hint)
    with gmpy2.context(gmpy2.get_context(), precision=128):
        value = gmpy2.mpfr(lam) ** k / gmpy2.factorial(k) * deriv.real
    if value > 0:
        _log2_seen.setdefault((lam, beta), {})[k] = float(gmpy2.log2(value))
    return value


def pmf(params: FpmParams, k: int) -> float:
    """pi_{lambda,beta}({k}).  Underflows to 0.0 far in the tail; use
    `log_pmf` there."""
    if k < 0:
        return 0.0
    return float(_pmf_mpfr(params.lam, params.beta, int(k)))


def log_pmf(params: FpmParams, k: int) -> float:
    """log pi_{lambda,beta}({k}), free of double-precision underflow."""
    if k < 0:
        return -math.inf
    v = _pmf_mpfr(params.lam, params.beta, int(k))
    if v <= 0:
        # only reachable through rounding of a vanishing mass
        return -math.inf
    return float(gmpy2.log(v))


def sum_over_support(
    params: FpmParams,
    f: Callable[[int], complex],
    tail_tol: float = DEFAULT_TAIL_TOL,
    k_max: int = MAX_SUPPORT,
    log_weight: Callable[[int], complex] | None = None,
) -> complex:
    """Sum f(k) e^{log_weight(k)} pi({k}) over k = 0, 1, 2, ... with a
    certified tail.

    `log_weight` keeps large exponential weights such as e^{zk} from
    overflowing; it is combined with log pi({k}) before exponentiating.

    Once the term magnitudes decrease with nonincreasing ratios r < 0.99, the
    remaining tail is bounded by |last term| * r / (1 - r).  Summation stops
    when that bound drops below tail_tol * max(1, |partial sum|).  Ratios at
    or above 0.99 never certify; reaching `k_max` without a certificate
    raises ConvergenceError.
    """
    if not tail_tol > 0:
        raise ValueError("tail_tol must be positive")
    total = 0j
    comp = 0j  # Kahan compensation
    prev_mag = None
    prev_ratio = None
    zero_run = 0
    for k in range(k_max + 1):
        if log_weight is None:
            term = complex(f(k)) * pmf(params, k)
        else:
            lw = complex(log_weight(k)) + log_pmf(params, k)
            term = complex(f(k)) * cmath.exp(lw) if lw.real > -745 else 0j
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        mag = abs(term)
        scale = max(1.0, abs(total))
        if mag == 0:
            # f may vanish at isolated points; only a long run of zeros
            # together with negligible mass certifies the tail
            zero_run += 1
            if zero_run >= 16 and pmf(params, k) < tail_tol * 1e-3:
                return total
            continue
        zero_run = 0
        if prev_mag is not None:
            ratio = mag / prev_mag
            if ratio < 0.99 and (prev_ratio is None or ratio <= prev_ratio * (1 + 1e-9)):
                if mag * ratio / (1.0 - ratio) < tail_tol * scale:
                    return total
            prev_ratio = ratio
        prev_mag = mag
    raise ConvergenceError(
        f"tail not certified within k_max={k_max} (ratio >= 0.99 or not decaying)",
        partial_sum=total,
    )


def laplace_transform(params: FpmParams, z: complex) -> complex:
    """l(z) = E_beta(lambda (e^z - 1))."""
    w = params.lam * (cmath.exp(complex(z)) - 1.0)
    return ml_eval(params.beta, w, SERIES_CONFIG)


def laplace_transform_direct(params: FpmParams, z: complex, tail_tol: float = DEFAULT_TAIL_TOL) -> complex:
    """l(z) as the sum of e^{zk} pi({k}) over the support."""
    z = complex(z)
    return sum_over_support(params, lambda k: 1.0, tail_tol, log_weight=lambda k: z * k)


def _moment_mp(lam: float, beta: float, n: int):
    lam_mp = mpmath.mpf(lam)
    beta_mp = mpmath.mpf(beta)
    return mpmath.fsum(
        mpmath.factorial(m) * mpmath.rgamma(m * beta_mp + 1) * stirling_second(n, m) * lam_mp**m
        for m in range(n + 1)
    )


def moment(params: FpmParams, n: int) -> float:
    """n-th raw moment, sum_m m!/Gamma(m beta + 1) S(n, m) lambda^m."""
    if n < 0:
        raise ValueError("moment order must be nonnegative")
    with mpmath.workdps(40):
        return float(_moment_mp(params.lam, params.beta, n))


def moment_oracle(params: FpmParams, n: int, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """n-th moment by direct summation of k^n pi({k})."""
    return sum_over_support(params, lambda k: float(k) ** n, tail_tol).real


def tilde_moment(params: FpmParams, m: int) -> float:
    """m! lambda^m / Gamma(m beta + 1): Taylor coefficients (times m!) of
    E_beta(lambda z)."""
    if m < 0:
        raise ValueError("order must be nonnegative")
    return math.exp(math.lgamma(m + 1) + m * math.log(params.lam) - math.lgamma(m * params.beta + 1))


def exp_moment(params: FpmParams, eps: float, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Integral of e^{eps |x|}; on the nonnegative support this is l(eps)."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return sum_over_support(params, lambda k: 1.0, tail_tol, log_weight=lambda k: eps * k).real


@dataclass(frozen=True)
class MomentCache:
    """Moments M(0..n_max) and tilde moments M~(0..n_max), held at `dps`
    decimal digits (mpmath) with float views."""

    params: FpmParams
    moments_mp: tuple
    tilde_mp: tuple
    dps: int
    moments: tuple = field(init=False)
    tilde: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "moments", tuple(float(m) for m in self.moments_mp))
        object.__setattr__(self, "tilde", tuple(float(m) for m in self.tilde_mp))
        if self.moments[0] != 1.0 or self.tilde[0] != 1.0:
            raise ValueError("zeroth moments must equal 1")
        if not all(math.isfinite(v) for v in self.moments + self.tilde):
            raise OverflowError("moment table overflows double precision")

    @property
    def n_max(self) -> int:
        return len(self.moments) - 1

    def require(self, n: int) -> None:
        if n > self.n_max:
            raise ValueError(f"moment cache covers n <= {self.n_max}, need {n}")


def default_dps(n_max: int) -> int:
    """Working digits for a cache to order n_max.  Polynomial coefficients and
    moments both grow factorially, so integrals of degree-n products cancel
    roughly 2 n digits."""
    return max(50, 30 + 2 * n_max)


@functools.lru_cache(maxsize=64)
def build_moment_cache(params: FpmParams, n_max: int, dps: int | None = None) -> MomentCache:
    """Eagerly tabulate M(n) and M~(n) for n <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    dps = dps or default_dps(n_max)
    with mpmath.workdps(dps):
        lam = mpmath.mpf(params.lam)
        beta = mpmath.mpf(params.beta)
        tilde = tuple(
            mpmath.factorial(m) * lam**m * mpmath.rgamma(m * beta + 1) for m in range(n_max + 1)
        )
        moments = tuple(
            mpmath.fsum(tilde[m] * stirling_second(n, m) for m in range(n + 1))
            for n in range(n_max + 1)
        )
    return MomentCache(params, moments, tilde, dps)

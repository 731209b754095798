"""Hilbert norms on C- and Q-expansions, the matching seminorms on Taylor
coefficients, growth norms on entire functions, and a divergence diagnostic
for truncated weighted series.

    test side:          ||phi||^2_{q,kappa}   = sum (n!)^{1+kappa} 2^{nq}  |phi_n|^2
    distribution side:  ||Phi||^2_{-q,-kappa} = sum (n!)^{1-kappa} 2^{-nq} |Phi_n|^2

Weighted terms are formed in log space, since (n!)^2 overflows long before
the products it multiplies do.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

from .expansions import CExpansion, QExpansion, TaylorSeries

__all__ = [
    "Sign",
    "NormParams",
    "NormOverflowWarning",
    "SeriesDiagnostic",
    "EntireNormEstimate",
    "test_norm",
    "dist_norm",
    "seminorm_series",
    "series_diagnostic",
    "hs_embedding_norm",
    "entire_type_norm",
]

# partial sums beyond this that keep growing count as divergent
DIVERGENCE_LEVEL = 1e12
DIVERGENCE_GROWTH = 1.01
# a series whose last term is still this large a fraction of its largest
# term, after this many terms, is not converging either
STALL_FRACTION = 0.5
STALL_MIN_TERMS = 50
_LOG_MAX = math.log(1.7976931348623157e308)


class Sign(str, enum.Enum):
    TEST = "test"
    DISTRIBUTION = "distribution"


class NormOverflowWarning(RuntimeWarning):
    """A norm exceeded the double range and was reported as +inf."""


@dataclass(frozen=True)
class NormParams:
    q: int
    kappa: float
    sign: Sign = Sign.TEST

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 0:
            raise ValueError(f"q must be a nonnegative integer, got {self.q}")
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError(f"kappa must lie in [0, 1], got {self.kappa}")
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "sign", Sign(self.sign))


def _log_weight(n: int, q: int, kappa: float, sign: Sign) -> float:
    if sign is Sign.TEST:
        return (1 + kappa) * math.lgamma(n + 1) + n * q * math.log(2)
    return (1 - kappa) * math.lgamma(n + 1) - n * q * math.log(2)


def _log_terms(coeffs: Sequence[complex], q: int, kappa: float, sign: Sign) -> list[float]:
    out = []
    for n, c in enumerate(coeffs):
        a = abs(c)
        out.append(_log_weight(n, q, kappa, sign) + 2 * math.log(a) if a > 0 else -math.inf)
    return out


def _logsumexp(xs: Sequence[float]) -> float:
    m = max(xs, default=-math.inf)
    if m == -math.inf:
        return -math.inf
    return m + math.log(math.fsum(math.exp(x - m) for x in xs))


@dataclass(frozen=True)
class SeriesDiagnostic:
    """Squared weighted sum of a truncated series, with a divergence verdict
    for the infinite series it was cut from."""

    value: float
    divergent: bool
    n_terms: int
    reason: str = ""


def series_diagnostic(
    coeffs: Sequence[complex], q: int, kappa: float, sign: Sign | str
) -> SeriesDiagnostic:
    """Weighted sum of squares plus a divergence check.

    Declared divergent when the partial sums pass 1e12 while still growing by
    more than 1% per term, or when after at least 50 terms the last term is
    still at least half the largest one (terms not decaying).
    """
    sign = Sign(sign)
    logs = _log_terms(coeffs, q, kappa, sign)
    total = _logsumexp(logs)
    value = math.exp(total) if total < _LOG_MAX else math.inf
    n = len(logs)
    if n >= 2:
        prev = _logsumexp(logs[:-1])
        if total > math.log(DIVERGENCE_LEVEL) and total - prev > math.log(DIVERGENCE_GROWTH):
            return SeriesDiagnostic(value, True, n, "partial sums above 1e12 and growing")
    finite = [x for x in logs if x > -math.inf]
    if n >= STALL_MIN_TERMS and finite and logs[-1] >= max(finite) + math.log(STALL_FRACTION):
        return SeriesDiagnostic(value, True, n, "terms not decaying")
    return SeriesDiagnostic(value, False, n)


def _norm(coeffs, q, kappa, sign) -> float:
    total = _logsumexp(_log_terms(coeffs, q, kappa, sign))
    half = 0.5 * total
    if half >= _LOG_MAX:
        warnings.warn("norm exceeds the double range", NormOverflowWarning, stacklevel=3)
        return math.inf
    return math.exp(half)


def test_norm(e: CExpansion, np: NormParams) -> float:
    """||phi||_{q,kappa}, the square root of the weighted sum.  Overflow gives
    +inf together with a NormOverflowWarning."""
    if np.sign is not Sign.TEST:
        raise ValueError("test_norm needs NormParams with sign=test")
    return _norm(e.coeffs, np.q, np.kappa, Sign.TEST)


# keep pytest from collecting the public name above as a test
test_norm.__test__ = False


def dist_norm(q: QExpansion, np: NormParams) -> float:
    """||Phi||_{-q,-kappa}."""
    if np.sign is not Sign.DISTRIBUTION:
        raise ValueError("dist_norm needs NormParams with sign=distribution")
    return _norm(q.coeffs, np.q, np.kappa, Sign.DISTRIBUTION)


def seminorm_series(taylor: TaylorSeries, q: int, kappa: float, sign: Sign | str) -> float:
    """Squared seminorm of Taylor coefficients: sum (n!)^{1+kappa} 2^{nq} |u_n|^2
    on the test side, sum (n!)^{1-kappa} 2^{-nq} |u_n|^2 on the distribution
    side."""
    return series_diagnostic(taylor.coeffs, q, kappa, sign).value


def hs_embedding_norm(p: int, q: int) -> float:
    """Squared Hilbert-Schmidt norm of the embedding of the p-space into the
    q-space, sum_n 2^{-(p-q) n} = 1 / (1 - 2^{q-p})."""
    if p <= q:
        raise ValueError(f"embedding is Hilbert-Schmidt only for p > q, got p={p}, q={q}")
    return 1.0 / (1.0 - 2.0 ** (q - p))


@dataclass(frozen=True)
class EntireNormEstimate:
    """Grid estimate of sup |u(z)| exp(-2^{-l} |z|^k).

    `trusted` is False when some grid radius lies beyond the series' trust
    radius; `unbounded` is set when the weighted values are still rising at
    the outermost radius, in which case `value` is +inf.
    """

    value: float
    trusted: bool
    unbounded: bool
    argmax_radius: float


def entire_type_norm(
    taylor: TaylorSeries, l: int, k: float, radius_grid: Sequence[float], n_angles: int = 32
) -> EntireNormEstimate:
    """|u|_{l,k} approximated on radius_grid x n_angles points."""
    if k < 1:
        raise ValueError("order k must be at least 1")
    radii = sorted(float(r) for r in radius_grid)
    if not radii or radii[0] < 0:
        raise ValueError("radius grid must be nonempty and nonnegative")
    damp = 2.0 ** (-l)
    per_radius = []
    for r in radii:
        best = 0.0
        for j in range(n_angles):
            z = cmath.rect(r, 2 * math.pi * j / n_angles)
            val, _ = taylor.evaluate(z)
            best = max(best, abs(val) * math.exp(-damp * r**k))
        per_radius.append(best)
    top = max(range(len(radii)), key=lambda i: per_radius[i])
    trusted = radii[-1] <= taylor.trust_radius
    rising = (
        len(radii) >= 2
        and top == len(radii) - 1
        and per_radius[-1] > per_radius[-2] * (1 + 1e-9)
    )
    value = math.inf if rising else per_radius[top]
    return EntireNormEstimate(value, trusted, rising, radii[top])

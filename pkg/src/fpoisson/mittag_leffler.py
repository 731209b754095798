"""Mittag-Leffler function E_beta(z) = sum z^n / Gamma(beta n + 1) and its
derivatives, for 0 < beta <= 1, by truncated Taylor summation.

The series is summed in MPFR arithmetic (gmpy2).  The peak term magnitude is
located in log space first; its height above the leading term sets the
starting precision.  After summing,
the accumulated rounding (at most about one ulp of the running magnitude per
term) is compared with the result; if cancellation between alternating terms
(z on the negative axis) has left fewer than 61 good bits, the sum is
repeated at a higher precision.

Taylor summation is only attempted for |z| <= WORKING_RADIUS; outside that
disc a ConvergenceError is raised instead of returning a meaningless value.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

__all__ = [
    "MlConfig",
    "ConvergenceError",
    "WORKING_RADIUS",
    "ml_eval",
    "ml_derivative",
    "ml_derivative_hp",
]

WORKING_RADIUS = 30.0
_GUARD_BITS = 32
_GOOD_BITS = 53 + 8


class ConvergenceError(ArithmeticError):
    """A truncated series could not be certified.

    ``partial_sum`` holds the last partial sum when one exists.
    """

    def __init__(self, message: str, partial_sum=None):
        super().__init__(message)
        self.partial_sum = partial_sum


@dataclass(frozen=True)
class MlConfig:
    rel_tol: float = 1e-16
    max_terms: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    return beta


def _quantize(bits: float) -> int:
    b = max(64, int(bits) + 1)
    return ((b + 63) // 64) * 64


_table_lock = threading.Lock()
# beta -> (precision in bits, [1/Gamma(beta n + 1) for n = 0, 1, ...])
_rgamma_tables: dict[float, tuple[int, list]] = {}


def _small_rational(beta: float) -> tuple[int, int] | None:
    """(p, q) with beta == p/q exactly and q <= 64, else None.

    Exactly means as binary values, so only dyadic q qualify: the double
    nearest 0.3 is not 3/10, and the functional-equation shortcut would then
    drift away from Gamma(beta n + 1) by about 1e-15 relative.
    """
    frac = Fraction(beta)
    return (frac.numerator, frac.denominator) if frac.denominator <= 64 else None


def _extend_rgamma(beta: float, prec: int, table: list, count: int) -> list:
    table = list(table)
    ratio = _small_rational(beta)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        b = gmpy2.mpfr(beta)
        for n in range(len(table), count):
            if ratio is not None and n >= ratio[1]:
                # Gamma(beta n + 1) = Gamma(beta (n-q) + 1) prod_{i=1}^{p} (beta (n-q) + i)
                p, q = ratio
                x = b * (n - q)
                prod = gmpy2.mpfr(1)
                for i in range(1, p + 1):
                    prod *= x + i
                table.append(table[n - q] / prod)
            else:
                table.append(1 / gmpy2.gamma(b * n + 1))
    return table


def _rgamma_table(beta: float, prec: int, count: int) -> list:
    """1/Gamma(beta n + 1) for n < count, carrying at least `prec` bits.

    One table per beta, kept at the highest precision requested so far;
    lower-precision callers reuse it since MPFR rounds every result to the
    active context anyway.  Precision and length grow geometrically.  When
    beta = p/q with q <= 64 only the first q entries need Gamma itself; the
    rest follow by the functional equation, with guard bits covering the
    accumulated rounding.
    """
    with _table_lock:
        have_prec, table = _rgamma_tables.get(beta, (0, []))
        if have_prec < prec:
            have_prec = max(prec, 2 * have_prec)
            count = max(count, len(table))
            table = []
        if len(table) < count:
            count = max(count, 2 * len(table))
            table = _extend_rgamma(beta, have_prec + _GUARD_BITS, table, count)
        _rgamma_tables[beta] = (have_prec, table)
        return table


def _log_term(beta: float, k: int, n: int, log_abs_z: float) -> float:
    return (
        math.lgamma(n + 1)
        - math.lgamma(n - k + 1)
        + (n - k) * log_abs_z
        - math.lgamma(beta * n + 1)
    )


def _peak_log_term(beta: float, k: int, z: complex, max_terms: int) -> float:
    """Natural log of the largest term magnitude of the k-th derivative series."""
    log_abs_z = math.log(abs(z))
    best = _log_term(beta, k, k, log_abs_z)
    prev = best
    for n in range(k + 1, k + max_terms):
        cur = _log_term(beta, k, n, log_abs_z)
        best = max(best, cur)
        if cur < prev:
            # term ratios decrease monotonically once past the peak
            break
        prev = cur
    return best


def _sum_at(beta: float, k: int, z: complex, cfg: MlConfig, prec: int):
    """Sum the k-th derivative series at `prec` bits.

    Returns (value, sum of |terms|, number of terms).
    """
    real = z.imag == 0
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        zc = gmpy2.mpfr(z.real) if real else gmpy2.mpc(z)
        rg = _rgamma_table(beta, prec, k + 64)
        coef = gmpy2.mpfr(math.factorial(k))  # n!/(n-k)! at n = k
        zpow = gmpy2.mpfr(1) if real else gmpy2.mpc(1)
        total = gmpy2.mpfr(0) if real else gmpy2.mpc(0)
        abs_total = gmpy2.mpfr(0)
        small_run = 0
        tol = gmpy2.mpfr(cfg.rel_tol)
        for i in range(cfg.max_terms):
            n = k + i
            if n >= len(rg):
                rg = _rgamma_table(beta, prec, 2 * n + 64)
            term = coef * zpow * rg[n]
            total += term
            mag = abs(term)
            abs_total += mag
            if mag <= tol * abs(total):
                small_run += 1
                if small_run == 2:
                    return gmpy2.mpc(total), abs_total, i + 1
            else:
                small_run = 0
            coef = coef * (n + 1) / (n + 1 - k)
            zpow = zpow * zc
        raise ConvergenceError(
            f"E_beta^({k}) series did not settle within {cfg.max_terms} terms "
            f"(beta={beta}, z={z})",
            partial_sum=complex(total),
        )


def _log2(x) -> float:
    return float(gmpy2.log2(x)) if x != 0 else -math.inf


def ml_derivative_hp(
    beta: float, k: int, z: complex, cfg: MlConfig | None = None, log2_hint: float | None = None
):
    """k-th derivative of E_beta at z as a gmpy2 ``mpc`` carrying at least
    61 correct bits.

    Use this instead of :func:`ml_derivative` when the value may overflow a
    double (large k) or feeds further high-precision arithmetic.
    `log2_hint`, a guess of log2 |value|, only sets the starting precision;
    it saves retries when cancellation is heavy and cannot affect accuracy.
    """
    beta = _check_beta(beta)
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    cfg = cfg or MlConfig()
    z = complex(z)
    if abs(z) > WORKING_RADIUS:
        raise ConvergenceError(
            f"|z| = {abs(z):.3g} exceeds the Taylor working radius {WORKING_RADIUS}"
        )
    if z == 0:
        with gmpy2.context(gmpy2.get_context(), precision=128):
            return gmpy2.mpc(gmpy2.factorial(k) / gmpy2.gamma(gmpy2.mpfr(beta) * k + 1))
    # MPFR precision is relative, so what matters is how far the peak term
    # sits above the result; the leading term stands in for the result and
    # the error check below catches any further cancellation
    peak_bits = _peak_log_term(beta, k, z, cfg.max_terms) / math.log(2)
    first_bits = _log_term(beta, k, k, math.log(abs(z))) / math.log(2)
    if log2_hint is not None and math.isfinite(log2_hint):
        first_bits = min(first_bits, log2_hint - 16)
    prec = _quantize(53 + _GUARD_BITS + max(0.0, peak_bits - first_bits))
    for _ in range(12):
        value, abs_total, count = _sum_at(beta, k, z, cfg, prec)
        err_bits = _log2((count + 8) * abs_total) - prec
        val_bits = _log2(abs(value))
        if err_bits <= val_bits - _GOOD_BITS:
            return value
        if val_bits == -math.inf:
            prec = _quantize(2 * prec)
        else:
            # the value may itself be rounding noise, so move by at least 64 bits
            shortfall = _GOOD_BITS - (val_bits - err_bits)
            prec = _quantize(prec + max(64.0, shortfall + _GUARD_BITS))
    raise ConvergenceError(
        f"precision escalation failed for E_beta^({k})(z) at beta={beta}, z={z}",
        partial_sum=complex(value),
    )


def ml_eval(beta: float, z: complex, cfg: MlConfig | None = None) -> complex:
    """E_beta(z)."""
    return complex(ml_derivative_hp(beta, 0, z, cfg))


def ml_derivative(beta: float, k: int, z: complex, cfg: MlConfig | None = None) -> complex:
    """E_beta^{(k)}(z) = sum_{n>=k} n!/(n-k)! z^(n-k) / Gamma(beta n + 1).

    Values beyond the double range come back as inf.
    """
    return complex(ml_derivative_hp(beta, k, z, cfg))

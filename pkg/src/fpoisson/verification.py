"""Invariant suites for one (lambda, beta) cell, shared by `verify` on the
command line and the experiment scripts.

Every check reports a residual and the threshold it must stay under.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import Callable

from .appell_system import (
    delta_z,
    dual_pair,
    expectation,
    first_kind_factor,
    int_deriv_c,
    q_action,
    q_action_stirling,
    rho,
)
from .combinatorics import stirling_first, stirling_second
from .expansions import CExpansion, QExpansion
from .measure import (
    FpmParams,
    build_moment_cache,
    laplace_transform,
    moment,
    moment_oracle,
    pmf,
    sum_over_support,
)
from .polynomials import (
    Poly,
    appell_bound_constants,
    build_family,
    build_gen_appell,
    c_basis_to_monomial,
    check_p3,
    check_p4,
    difference,
    difference_stirling,
    gen_appell_via_p1,
    poly_eval,
)
from .spaces import NormParams, Sign, dist_norm, series_diagnostic, test_norm
from .transforms import s_inverse, s_transform, taylor_of_s
from .wick import wick_exp, wick_inverse, wick_log, wick_product

__all__ = ["Check", "SUITES", "run_suites", "DEFAULT_SEED"]

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.threshold

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "threshold": self.threshold,
            "pass": self.passed,
        }


def laplace_points() -> list[complex]:
    """Ten fixed points in the closed unit disc."""
    polar = [(1, 0), (1, 1.2), (1, 2.5), (1, math.pi), (0.5, 0.7),
             (0.8, -1.9), (0.3, 2.2), (1, -0.6), (0.9, 4.4), (0.6, 5.5)]
    return [cmath.rect(r, t) for r, t in polar]


def laplace_residual(params: FpmParams, z: complex) -> float:
    """|l(z) - sum e^{zk} pi({k})| relative to l(Re z) = sum |e^{zk}| pi({k}),
    the scale the direct sum is computed against."""
    direct = sum_over_support(params, lambda k: 1.0, log_weight=lambda k: z * k)
    scale = laplace_transform(params, z.real).real
    return abs(laplace_transform(params, z) - direct) / scale


def suite_measure(params: FpmParams, rng: random.Random) -> list[Check]:
    checks = []
    if params.beta == 1.0:
        worst = max(
            abs(pmf(params, k) - math.exp(-params.lam + k * math.log(params.lam) - math.lgamma(k + 1)))
            for k in range(51)
        )
        checks.append(Check("poisson_reduction_pmf", worst, 1e-12))
    total = math.fsum(pmf(params, k) for k in range(201))
    checks.append(Check("normalization_k200", abs(total - 1), 1e-12))
    checks.append(Check("pmf_nonnegative", max(0.0, -min(pmf(params, k) for k in range(201))), 1e-15))
    rel = max(abs(moment(params, n) - moment_oracle(params, n)) / moment(params, n) for n in range(9))
    checks.append(Check("moments_closed_vs_direct", rel, 1e-10))
    checks.append(
        Check("laplace_identity", max(laplace_residual(params, z) for z in laplace_points()), 1e-10)
    )
    return checks


def suite_polynomials(params: FpmParams, rng: random.Random) -> list[Check]:
    cache = build_moment_cache(params, 12)
    checks = []
    worst = 0.0
    for n in range(11):
        a = build_gen_appell(params, n, cache).coeffs
        b = gen_appell_via_p1(params, n, cache).coeffs
        worst = max(worst, max(abs(x - y) / max(abs(x), 1e-300) for x, y in zip(a, b) if x != 0))
    checks.append(Check("bell_vs_p1_route", worst, 1e-9))
    fam_c = build_family(params, "C", 12)
    fam_a = build_family(params, "A", 12)
    monic = max(abs(f[n].coeffs[-1] - 1) for f in (fam_a, fam_c) for n in range(13))
    checks.append(Check("monic", monic, 1e-12))
    p5 = max(abs(expectation(fam_c[n], params, cache) - (n == 0)) for n in range(11))
    checks.append(Check("p5_mean_zero", p5, 1e-10))
    p34 = 0.0
    for n in range(9):
        for _ in range(10):
            x, y = rng.uniform(-3, 6), rng.uniform(-3, 6)
            r = max(check_p3(params, n, x, y, cache), check_p4(params, n, x, y, cache))
            p34 = max(p34, r / (1e-8 * math.factorial(n)))
    checks.append(Check("p3_p4_scaled", p34, 1.0))
    diff = 0.0
    for _ in range(10):
        p = Poly([rng.uniform(-1, 1) for _ in range(rng.randint(1, 9))])
        for k in range(p.degree + 2):
            d1, d2 = difference(p, k), difference_stirling(p, k)
            scale = max((abs(c) for c in d1.coeffs), default=0.0) + 1.0
            err = max((abs(x - y) for x, y in zip(d1.coeffs, d2.coeffs)), default=0.0)
            diff = max(diff, err / scale)
    checks.append(Check("difference_vs_stirling_rel", diff, 1e-12))
    eps = 0.5
    c_eps, sigma = appell_bound_constants(params, eps)
    excess = max(
        abs(poly_eval(fam_c[n], x)) / (c_eps * math.factorial(n) * sigma**-n * math.exp(eps * x))
        for n in range(9)
        for x in range(21)
    )
    checks.append(Check("p6_bound_ratio", excess, 1.0))
    checks.append(Check("stirling_orthogonality_failures", float(stirling_orthogonality_defect(30)), 0.0))
    if params.beta == 1.0:
        lam = params.lam
        charlier = [
            [1],
            [-lam, 1],
            [lam**2, -(1 + 2 * lam), 1],
            [-(lam**3), 2 + 3 * lam + 3 * lam**2, -(3 + 3 * lam), 1],
        ]
        dev = max(
            abs(c - e) for n in range(4) for c, e in zip(fam_c[n].coeffs, charlier[n])
        )
        checks.append(Check("charlier_reduction", dev, 1e-12))
    return checks


def suite_system(params: FpmParams, rng: random.Random) -> list[Check]:
    cache = build_moment_cache(params, 24)
    fam = build_family(params, "C", 12)
    bi = 0.0
    for n in range(11):
        for m in range(11):
            target = math.factorial(n) if n == m else 0
            scale = 1e-8 * max(1, math.factorial(n))
            for route in (q_action, q_action_stirling):
                bi = max(bi, abs(route(m, fam[n], params, cache) - target) / scale)
    checks = [Check("biorthogonality_scaled", bi, 1.0)]
    lem = 0.0
    for n in range(9):
        for k in range(9):
            target = first_kind_factor(n, k)
            tol = 1e-8 * abs(target) + 1e-10
            lem = max(lem, abs(int_deriv_c(n, k, params, cache) - target) / tol)
    checks.append(Check("int_deriv_lemma_scaled", lem, 1.0))
    d_err = r_err = 0.0
    for _ in range(5):
        e = CExpansion(params, [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(rng.randint(1, 8))])
        phi = c_basis_to_monomial(e, fam)
        z = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        d_err = max(d_err, abs(dual_pair(e, delta_z(z, params, 8, cache)) - poly_eval(phi, z)))
        shift = sum_over_support(params, lambda k: poly_eval(phi, k - z))
        r_err = max(r_err, abs(dual_pair(e, rho(z, params, 8)) - shift))
    checks.append(Check("delta_point_evaluation", d_err, 1e-8))
    checks.append(Check("rho_shifted_integral", r_err, 1e-8))
    return checks


def _random_q(rng: random.Random, length: int, scale: float = 0.5) -> QExpansion:
    return QExpansion([complex(rng.gauss(0, scale), rng.gauss(0, scale)) for _ in range(length)])


def suite_wick(params: FpmParams, rng: random.Random) -> list[Check]:
    hom = 0.0
    for _ in range(10):
        a, b = _random_q(rng, rng.randint(1, 8)), _random_q(rng, rng.randint(1, 8))
        ab = wick_product(a, b)
        z = cmath.rect(rng.uniform(0, 0.6), rng.uniform(0, 2 * math.pi))
        hom = max(hom, abs(s_transform(ab, z) - s_transform(a, z) * s_transform(b, z)))
    checks = [Check("s_homomorphism", hom, 1e-10)]
    explog = inv = 0.0
    for _ in range(10):
        a = _random_q(rng, 6)
        a = QExpansion([abs(a.coeffs[0]) + 0.2] + list(a.coeffs[1:]))
        back = wick_log(wick_exp(a, 12), 12)
        explog = max(explog, max(abs(x - y) for x, y in zip(back.coeffs, a.padded(12))))
        prod = wick_product(a, wick_inverse(a, 12)).coeffs[:12]
        inv = max(inv, max(abs(x - (1 if i == 0 else 0)) for i, x in enumerate(prod)))
    checks.append(Check("exp_log_inverse_pair", explog, 1e-9))
    checks.append(Check("inverse_product_unit", inv, 1e-9))
    ratio = 0.0
    for p, q in ((0, 0), (1, 2)):
        r = p + q + 1
        for _ in range(50):
            a, b = _random_q(rng, rng.randint(1, 10), 1.0), _random_q(rng, rng.randint(1, 10), 1.0)
            lhs = dist_norm(wick_product(a, b), NormParams(r, 1, Sign.DISTRIBUTION))
            rhs = dist_norm(a, NormParams(q, 1, Sign.DISTRIBUTION)) * dist_norm(
                b, NormParams(p, 1, Sign.DISTRIBUTION)
            )
            ratio = max(ratio, lhs / rhs)
    # equality holds when both factors have length one, so leave room for rounding
    checks.append(Check("wick_norm_inequality_ratio", ratio, 1.0 + 1e-12))
    q = _random_q(rng, 12)
    rt = max(abs(x - y) for x, y in zip(s_inverse(taylor_of_s(q, 12)).coeffs, q.coeffs))
    checks.append(Check("s_inverse_roundtrip", rt, 1e-12))
    return checks


def suite_spaces(params: FpmParams, rng: random.Random) -> list[Check]:
    ident = 0.0
    for q in range(4):
        for r in (0.5, 1.0, 1.5):
            e = CExpansion(params, [r**n / math.factorial(n) for n in range(60)])
            v = test_norm(e, NormParams(q, 0)) ** 2
            ident = max(ident, abs(v / math.exp(2**q * r * r) - 1))
    checks = [Check("wick_exponential_norm_identity", ident, 1e-8)]
    wrong = 0
    for q in range(4):
        for f in (0.9, 1.0, 1.1):
            r = f * 2 ** (-q / 2)
            diag = series_diagnostic([r**n / math.factorial(n) for n in range(60)], q, 1, Sign.TEST)
            wrong += diag.divergent != (f >= 1.0)
    checks.append(Check("kappa1_divergence_misclassified", float(wrong), 0.0))
    mono = 0.0
    for _ in range(10):
        e = CExpansion(params, [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(8)])
        for q in range(4):
            mono = max(mono, test_norm(e, NormParams(q, 0.5)) - test_norm(e, NormParams(q + 1, 0.5)))
    checks.append(Check("test_norm_monotone_in_q", max(mono, 0.0), 0.0))
    return checks


SUITES: dict[str, Callable[[FpmParams, random.Random], list[Check]]] = {
    "measure": suite_measure,
    "polynomials": suite_polynomials,
    "system": suite_system,
    "wick": suite_wick,
    "spaces": suite_spaces,
}


def run_suites(names: list[str], params: FpmParams, seed: int = DEFAULT_SEED) -> dict[str, list[Check]]:
    out = {}
    for name in names:
        out[name] = SUITES[name](params, random.Random(seed))
    return out


def stirling_orthogonality_defect(n_max: int) -> int:
    """Number of (n, k) with sum_j s(n,j) S(j,k) != delta_{nk}, n, k <= n_max."""
    bad = 0
    for n in range(n_max + 1):
        for k in range(n_max + 1):
            total = sum(stirling_first(n, j) * stirling_second(j, k) for j in range(n + 1))
            bad += total != (n == k)
    return bad

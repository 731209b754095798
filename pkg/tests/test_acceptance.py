"""Acceptance criteria 1-12, one pass/fail line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import random
import sys
import time

import pytest

from fpoisson.appell_system import (
    delta_z,
    dual_pair,
    first_kind_factor,
    int_deriv_c,
    q_action,
    q_action_stirling,
    rho,
)
from fpoisson.combinatorics import stirling_first, stirling_second
from fpoisson.expansions import CExpansion, QExpansion
from fpoisson.measure import FpmParams, build_moment_cache, moment, moment_oracle, pmf, sum_over_support
from fpoisson.polynomials import (
    build_family,
    build_gen_appell,
    c_basis_to_monomial,
    check_p3,
    check_p4,
    gen_appell_via_p1,
    poly_eval,
)
from fpoisson.spaces import NormParams, Sign, series_diagnostic, test_norm
from fpoisson.transforms import s_inverse, taylor_of_s
from fpoisson.verification import laplace_points, laplace_residual, suite_wick

LAMBDAS = (0.5, 1.0, 2.0)
BETAS = (0.25, 0.5, 0.75, 1.0)
GRID = [FpmParams(lam, beta) for lam, beta in itertools.product(LAMBDAS, BETAS)]

REPORT: dict[int, str] = {}


def _cell(p):
    return f"(lambda={p.lam:g}, beta={p.beta:g})"


def crit_1():
    worst = 0.0
    for lam in LAMBDAS:
        p = FpmParams(lam, 1.0)
        for k in range(51):
            exact = math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1))
            worst = max(worst, abs(pmf(p, k) - exact))
    charlier = 0.0
    for lam in LAMBDAS:
        fam = build_family(FpmParams(lam, 1.0), "C", 3)
        want = [
            [1],
            [-lam, 1],
            [lam**2, -(1 + 2 * lam), 1],
            [-(lam**3), 2 + 3 * lam + 3 * lam**2, -(3 + 3 * lam), 1],
        ]
        for n in range(4):
            charlier = max(charlier, max(abs(a - b) for a, b in zip(fam[n].coeffs, want[n])))
    ok = worst <= 1e-12 and charlier <= 1e-12
    return ok, f"pmf max abs dev {worst:.2e}, Charlier max coeff dev {charlier:.2e} (tol 1e-12)"


def crit_2():
    worst, where = 0.0, None
    for p in GRID:
        d = abs(math.fsum(pmf(p, k) for k in range(201)) - 1)
        if d >= worst:
            worst, where = d, p
    return worst <= 1e-12, f"max |sum_(k<=200) pmf - 1| = {worst:.2e} at {_cell(where)} (tol 1e-12)"


def crit_3():
    worst = 0.0
    for p in GRID:
        for n in range(9):
            m = moment(p, n)
            worst = max(worst, abs(m - moment_oracle(p, n)) / m)
    p = FpmParams(1.0, 1.0)
    table = max(abs(moment(p, n) - v) for n, v in enumerate((1, 1, 2, 5, 15)))
    ok = worst <= 1e-10 and table <= 1e-12
    return ok, f"closed vs direct max rel {worst:.2e} (tol 1e-10), (1,1,2,5,15) dev {table:.2e} (tol 1e-12)"


def crit_4():
    worst, where = 0.0, None
    for p in GRID:
        for z in laplace_points():
            r = laplace_residual(p, z)
            if r >= worst:
                worst, where = r, (p, z)
    p, z = where
    return worst <= 1e-10, (
        f"max |l(z) - sum e^(zk) pmf(k)| / l(Re z) = {worst:.2e} at {_cell(p)}, z={z:.3f} (tol 1e-10)"
    )


def crit_5():
    worst = 0.0
    for p in GRID:
        cache = build_moment_cache(p, 12)
        for n in range(11):
            a, b = build_gen_appell(p, n, cache).coeffs, gen_appell_via_p1(p, n, cache).coeffs
            worst = max(worst, max(abs(x - y) / abs(x) for x, y in zip(a, b) if x != 0))
    return worst <= 1e-9, f"Bell vs P1' route max coeff rel dev {worst:.2e} (tol 1e-9)"


def crit_6():
    worst = 0.0
    for p in GRID:
        cache = build_moment_cache(p, 24)
        fam = build_family(p, "C", 10)
        for n, m in itertools.product(range(11), repeat=2):
            target = math.factorial(n) if n == m else 0
            scale = 1e-8 * max(1, math.factorial(n))
            for route in (q_action, q_action_stirling):
                worst = max(worst, abs(route(m, fam[n], p, cache) - target) / scale)
    return worst <= 1, f"max |<<C_n,Q_m>> - n! delta| / (1e-8 max(1,n!)) = {worst:.2e}, both routes (tol 1)"


def crit_7():
    worst = 0.0
    for p in GRID:
        cache = build_moment_cache(p, 10)
        for n, k in itertools.product(range(9), repeat=2):
            target = first_kind_factor(n, k)
            tol = 1e-8 * abs(target) + 1e-10
            worst = max(worst, abs(int_deriv_c(n, k, p, cache) - target) / tol)
    return worst <= 1, f"max |int D^k C_n - k! s(n,k)| / tol = {worst:.2e} (tol 1)"


def crit_8():
    worst = {"P3": 0.0, "P4": 0.0, "P5": 0.0}
    rng = random.Random(2024)
    for p in GRID:
        cache = build_moment_cache(p, 12)
        fam = build_family(p, "C", 10)
        for n in range(9):
            scale = 1e-8 * math.factorial(n)
            for _ in range(10):
                x, y = rng.uniform(-3, 6), rng.uniform(-3, 6)
                worst["P3"] = max(worst["P3"], check_p3(p, n, x, y, cache) / scale)
                worst["P4"] = max(worst["P4"], check_p4(p, n, x, y, cache) / scale)
        for n in range(11):
            e = math.fsum(c.real * moment_oracle(p, d) for d, c in enumerate(fam[n].coeffs))
            worst["P5"] = max(worst["P5"], abs(e - (n == 0)) / (1e-8 * math.factorial(n)))
    ok = all(v <= 1 for v in worst.values())
    return ok, "residual / (1e-8 n!): " + ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + " (tol 1)"


def crit_9():
    bad = 0
    for n, k in itertools.product(range(31), repeat=2):
        total = sum(stirling_first(n, j) * stirling_second(j, k) for j in range(n + 1))
        bad += total != (n == k)
    return bad == 0, f"{bad} nonzero defects in sum_j s(n,j) S(j,k) - delta, n,k <= 30 (exact)"


def crit_10():
    checks = {c.name: c for c in suite_wick(FpmParams(1.0, 0.5), random.Random(20240601))}
    names = ("s_homomorphism", "exp_log_inverse_pair", "inverse_product_unit", "wick_norm_inequality_ratio")
    ok = all(checks[n].passed for n in names)
    return ok, ", ".join(f"{n} {checks[n].residual:.2e}/{checks[n].threshold:g}" for n in names)


def crit_11():
    p = FpmParams(1.0, 0.5)
    worst, fails = 0.0, []
    for q in range(4):
        for r in (0.25, 0.5, 1.0, 1.5, 1.8, 1.9, 2.0):
            e = CExpansion(p, [r**n / math.factorial(n) for n in range(60)])
            err = abs(test_norm(e, NormParams(q, 0)) ** 2 / math.exp(2**q * r * r) - 1)
            worst = max(worst, err)
            if err > 1e-8:
                fails.append(f"q={q},|z|={r:g}:{err:.1e}")
    wrong = 0
    for q in range(4):
        for f in (0.9, 1.0, 1.1):
            r = f * 2 ** (-q / 2)
            diag = series_diagnostic([r**n / math.factorial(n) for n in range(60)], q, 1, Sign.TEST)
            wrong += diag.divergent != (f >= 1.0)
    ok = not fails and wrong == 0
    detail = f"identity max rel err {worst:.2e} (tol 1e-8)"
    if fails:
        detail += " failing " + " ".join(fails)
    return ok, detail + f"; kappa=1 misclassified {wrong}/12"


def crit_12():
    rng = random.Random(12)
    rt = 0.0
    for _ in range(20):
        n = rng.randint(1, 12)
        q = QExpansion([complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)])
        back = s_inverse(taylor_of_s(q, n))
        rt = max(rt, max(abs(a - b) for a, b in zip(back.coeffs, q.coeffs)))
    d_err = r_err = 0.0
    for p in GRID:
        cache = build_moment_cache(p, 10)
        fam = build_family(p, "C", 8)
        for _ in range(3):
            e = CExpansion(p, [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(rng.randint(1, 8))])
            phi = c_basis_to_monomial(e, fam)
            z = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
            d_err = max(d_err, abs(dual_pair(e, delta_z(z, p, 8, cache)) - poly_eval(phi, z)))
            shift = sum_over_support(p, lambda k: poly_eval(phi, k - z))
            r_err = max(r_err, abs(dual_pair(e, rho(z, p, 8)) - shift))
    ok = rt <= 1e-12 and d_err <= 1e-8 and r_err <= 1e-8
    return ok, f"round trip {rt:.2e} (tol 1e-12), delta {d_err:.2e}, rho {r_err:.2e} (tol 1e-8)"


CRITERIA = {i: globals()[f"crit_{i}"] for i in range(1, 13)}


def evaluate(i):
    t0 = time.perf_counter()
    ok, detail = CRITERIA[i]()
    line = f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{time.perf_counter() - t0:.1f}s]"
    REPORT[i] = line
    return ok, line


@pytest.mark.parametrize("i", range(1, 13))
def test_criterion(i):
    ok, line = evaluate(i)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(i) for i in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)

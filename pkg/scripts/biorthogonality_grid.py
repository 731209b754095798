"""Largest deviation of <<C_n, Q_m>> from n! delta_{nm}, scaled by max(1, n!),
per (lambda, beta) cell and for both ways of applying Q_m."""

from __future__ import annotations

import argparse
import itertools
import math
from dataclasses import dataclass, field

from fpoisson.appell_system import q_action, q_action_stirling
from fpoisson.measure import FpmParams, build_moment_cache
from fpoisson.polynomials import build_family


@dataclass
class Config:
    lambdas: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    betas: list[float] = field(default_factory=lambda: [0.25, 0.5, 0.75, 1.0])
    n_max: int = 10


def worst_deviation(p: FpmParams, n_max: int, route) -> float:
    cache = build_moment_cache(p, 2 * n_max + 4)
    fam = build_family(p, "C", n_max)
    worst = 0.0
    for n, m in itertools.product(range(n_max + 1), repeat=2):
        target = math.factorial(n) if n == m else 0
        worst = max(worst, abs(route(m, fam[n], p, cache) - target) / max(1, math.factorial(n)))
    return worst


def main(cfg: Config) -> None:
    print(f"{'lambda':>6} {'beta':>5} {'Delta^m route':>14} {'Stirling route':>15}")
    for lam, beta in itertools.product(cfg.lambdas, cfg.betas):
        p = FpmParams(lam, beta)
        a = worst_deviation(p, cfg.n_max, q_action)
        b = worst_deviation(p, cfg.n_max, q_action_stirling)
        print(f"{lam:6g} {beta:5g} {a:14.2e} {b:15.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    main(Config(n_max=ap.parse_args().n_max))

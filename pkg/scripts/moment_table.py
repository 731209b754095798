"""Raw moments M(n) in closed form next to direct summation over the support,
for a grid of (lambda, beta)."""

from __future__ import annotations

import argparse
import itertools
from dataclasses import dataclass, field

from fpoisson.measure import FpmParams, moment, moment_oracle


@dataclass
class Config:
    lambdas: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    betas: list[float] = field(default_factory=lambda: [0.25, 0.5, 0.75, 1.0])
    n_max: int = 8


def main(cfg: Config) -> None:
    print(f"{'lambda':>6} {'beta':>5} {'n':>2} {'closed form':>22} {'direct sum':>22} {'rel dev':>9}")
    for lam, beta in itertools.product(cfg.lambdas, cfg.betas):
        p = FpmParams(lam, beta)
        for n in range(cfg.n_max + 1):
            a, b = moment(p, n), moment_oracle(p, n)
            print(f"{lam:6g} {beta:5g} {n:2d} {a:22.15e} {b:22.15e} {abs(a - b) / a:9.1e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    main(Config(n_max=ap.parse_args().n_max))

"""Laplace transform E_beta(lambda (e^z - 1)) against the direct sum of
e^{zk} pmf(k), at ten points of the closed unit disc.

Both the absolute gap and the gap relative to l(Re z) = sum |e^{zk}| pmf(k)
are shown; the direct sum cannot do better than rounding at that scale.
"""

from __future__ import annotations

import argparse
import itertools
from dataclasses import dataclass, field

from fpoisson.measure import FpmParams, laplace_transform
from fpoisson.verification import laplace_points, laplace_residual


@dataclass
class Config:
    lambdas: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    betas: list[float] = field(default_factory=lambda: [0.25, 0.5, 0.75, 1.0])


def main(cfg: Config) -> None:
    print(f"{'lambda':>6} {'beta':>5} {'z':>16} {'|l(z)|':>10} {'l(Re z)':>10} {'abs gap':>9} {'scaled':>9}")
    for lam, beta in itertools.product(cfg.lambdas, cfg.betas):
        p = FpmParams(lam, beta)
        for z in laplace_points():
            scale = laplace_transform(p, z.real).real
            scaled = laplace_residual(p, z)
            print(
                f"{lam:6g} {beta:5g} {z.real:7.3f}{z.imag:+7.3f}j "
                f"{abs(laplace_transform(p, z)):10.3e} {scale:10.3e} {scaled * scale:9.1e} {scaled:9.1e}"
            )


if __name__ == "__main__":
    argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter).parse_args()
    main(Config())

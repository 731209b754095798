"""Where does the truncated Q-projection of a polynomial reproduce its
S-transform?

The series sum_n Phi_n w^n in w = e^z - 1 converges only for |w| < R, with R
the modulus of the zero of E_beta(lambda w) nearest the origin.  For each
cell this prints R and the error of the truncated series against the direct
sum at |w| = f R for a few fractions f.
"""

from __future__ import annotations

import argparse
import cmath
import itertools
import random
from dataclasses import dataclass, field

from fpoisson.appell_system import project_to_q
from fpoisson.measure import FpmParams, build_moment_cache
from fpoisson.polynomials import Poly
from fpoisson.transforms import s_image_radius, s_transform, s_transform_direct


@dataclass
class Config:
    lambdas: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    betas: list[float] = field(default_factory=lambda: [0.25, 0.5, 0.75])
    fractions: list[float] = field(default_factory=lambda: [0.25, 0.5, 0.75, 0.9, 1.1])
    n_max: int = 60
    seed: int = 1


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    poly = Poly([rng.uniform(-1, 1) for _ in range(5)])
    head = " ".join(f"{'f=' + format(f, 'g'):>9}" for f in cfg.fractions)
    print(f"{'lambda':>6} {'beta':>5} {'R':>7} {head}")
    for lam, beta in itertools.product(cfg.lambdas, cfg.betas):
        p = FpmParams(lam, beta)
        radius = s_image_radius(p)
        q = project_to_q(poly, p, build_moment_cache(p, cfg.n_max + 6), cfg.n_max)
        errs = []
        for f in cfg.fractions:
            w = f * radius * cmath.exp(0.7j)
            if abs(w) >= 1.0 and abs(cmath.log(1 + w)) > 1.0:
                # keep z inside the disc where the direct sum is cheap
                errs.append(f"{'-':>9}")
                continue
            z = cmath.log(1 + w)
            direct = s_transform_direct(poly, p, z)
            errs.append(f"{abs(s_transform(q, z) - direct) / max(1.0, abs(direct)):9.1e}")
        print(f"{lam:6g} {beta:5g} {radius:7.3f} {' '.join(errs)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    main(Config(n_max=args.n_max, seed=args.seed))

"""Truncation error of the Wick-exponential norm identity
||sum z^n/n! C_n||^2_{q,0} = exp(2^q |z|^2) as a function of the number of
terms, and the number of terms needed for a given tolerance.

The squared norm is a Poisson(mu) partial sum with mu = 2^q |z|^2, so the
relative error after N terms is the Poisson tail P(X >= N).
"""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass, field

from fpoisson.expansions import CExpansion
from fpoisson.measure import FpmParams
from fpoisson.spaces import NormParams, test_norm


@dataclass
class Config:
    qs: list[int] = field(default_factory=lambda: [0, 1, 2, 3])
    radii: list[float] = field(default_factory=lambda: [0.5, 1.0, 1.5, 1.8, 1.9, 2.0])
    lengths: list[int] = field(default_factory=lambda: [40, 60, 80, 100])
    tol: float = 1e-8


def rel_error(q: int, r: float, n: int) -> float:
    e = CExpansion(FpmParams(1.0, 1.0), [r**k / math.factorial(k) for k in range(n)])
    return abs(test_norm(e, NormParams(q, 0)) ** 2 / math.exp(2**q * r * r) - 1)


def terms_needed(q: int, r: float, tol: float) -> int:
    n = 1
    while rel_error(q, r, n) > tol:
        n += 1
    return n


def main(cfg: Config) -> None:
    head = " ".join(f"{'N=' + str(n):>9}" for n in cfg.lengths)
    print(f"{'q':>2} {'|z|':>4} {'mu':>6} {head} {'N for ' + format(cfg.tol, 'g'):>10}")
    for q in cfg.qs:
        for r in cfg.radii:
            errs = " ".join(f"{rel_error(q, r, n):9.1e}" for n in cfg.lengths)
            print(f"{q:2d} {r:4g} {2**q * r * r:6.2f} {errs} {terms_needed(q, r, cfg.tol):10d}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--tol", type=float, default=Config.tol)
    main(Config(tol=ap.parse_args().tol))

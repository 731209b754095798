"""Run every invariant suite on each (lambda, beta) cell and write one JSON
document with all residuals."""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from fpoisson.measure import FpmParams
from fpoisson.verification import DEFAULT_SEED, SUITES, run_suites


@dataclass
class Config:
    lambdas: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    betas: list[float] = field(default_factory=lambda: [0.25, 0.5, 0.75, 1.0])
    seed: int = DEFAULT_SEED
    workers: int = 4


def run_cell(args):
    lam, beta, seed = args
    res = run_suites(list(SUITES), FpmParams(lam, beta), seed)
    return {
        "params": {"lambda": lam, "beta": beta},
        "checks": {f"{s}.{c.name}": c.as_dict() for s, checks in res.items() for c in checks},
    }


def main(cfg: Config) -> int:
    jobs = [(lam, beta, cfg.seed) for lam, beta in itertools.product(cfg.lambdas, cfg.betas)]
    # cells are independent and every library call is pure
    with ProcessPoolExecutor(cfg.workers) as pool:
        cells = list(pool.map(run_cell, jobs))
    failed = [
        f"{c['params']} {name}" for c in cells for name, chk in c["checks"].items() if not chk["pass"]
    ]
    json.dump({"seed": cfg.seed, "cells": cells, "failed": failed}, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return 1 if failed else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--workers", type=int, default=Config.workers)
    args = ap.parse_args()
    raise SystemExit(main(Config(seed=args.seed, workers=args.workers)))

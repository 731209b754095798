"""Command-line entry point.

Every subcommand prints one JSON object with keys `params`, `results`,
`residuals` and `status`.  Exit codes: 0 pass, 1 usage, 2 numerical failure,
3 a residual above its threshold.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import mpmath

from .appell_system import q_action, q_action_stirling
from .combinatorics import stirling_second
from .expansions import CExpansion, QExpansion, TaylorSeries, expansion_to_dict, load_expansion
from .measure import FpmParams, build_moment_cache, moment, moment_oracle, pmf
from .mittag_leffler import ConvergenceError
from .polynomials import Kind, build_family
from .spaces import NormParams, Sign, dist_norm, series_diagnostic, test_norm
from .transforms import c_transform, c_transform_direct, s_inverse, s_transform
from .verification import DEFAULT_SEED, SUITES, run_suites
from .wick import wick_exp, wick_inverse, wick_log, wick_power, wick_product

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_SUITE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags, which collides with the numerical code
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected re or re,im, got {text!r}")


def _pair(c: complex) -> list[float]:
    return [c.real, c.imag]


def _residual(value: float, threshold: float | None) -> dict:
    return {
        "value": value,
        "threshold": threshold,
        "pass": None if threshold is None else bool(value <= threshold),
    }


def _params(ns) -> FpmParams:
    return FpmParams(ns.lam, ns.beta)


def _load(path: str, *kinds):
    try:
        obj = load_expansion(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc
    if kinds and not isinstance(obj, kinds):
        names = "/".join(k.__name__ for k in kinds)
        raise UsageError(f"{path}: expected {names}, got {type(obj).__name__}")
    return obj


# -- subcommands --------------------------------------------------------------


def cmd_pmf(ns):
    params = _params(ns)
    values = [pmf(params, k) for k in range(ns.k_max + 1)]
    total = math.fsum(values)
    results = {"k": list(range(ns.k_max + 1)), "pmf": values, "sum": total}
    # the defect only means something once the tail beyond k_max is negligible
    return params, results, {"normalization_defect": _residual(abs(total - 1), None)}


def cmd_moments(ns):
    params = _params(ns)
    closed = [moment(params, n) for n in range(ns.n_max + 1)]
    results = {"n": list(range(ns.n_max + 1)), "closed_form": closed}
    residuals = {}
    if ns.oracle:
        direct = [moment_oracle(params, n) for n in range(ns.n_max + 1)]
        results["direct_sum"] = direct
        rel = max(abs(a - b) / abs(a) for a, b in zip(closed, direct))
        residuals["closed_vs_direct_rel"] = _residual(rel, 1e-10)
    return params, results, residuals


def _falling_coeffs(exact: Sequence) -> list[complex]:
    # x^d = sum_k S(d, k) (x)_k
    out = [mpmath.mpc(0)] * len(exact)
    for d, c in enumerate(exact):
        for k in range(d + 1):
            out[k] += stirling_second(d, k) * c
    return [complex(c) for c in out]


def cmd_appell(ns):
    params = _params(ns)
    family = build_family(params, ns.kind, ns.n)
    if ns.basis == "monomial":
        coeffs = list(family.polys[ns.n].coeffs)
    else:
        with mpmath.workdps(build_moment_cache(params, ns.n).dps):
            coeffs = _falling_coeffs(family.exact[ns.n])
    results = {"kind": ns.kind, "n": ns.n, "basis": ns.basis, "coeffs": [_pair(complex(c)) for c in coeffs]}
    return params, results, {}


def cmd_pair(ns):
    params = _params(ns)
    n_max = ns.n_max
    cache = build_moment_cache(params, 2 * n_max + 2)
    family = build_family(params, "C", n_max)
    matrix, worst = [], {"delta": 0.0, "stirling": 0.0}
    for n in range(n_max + 1):
        row = []
        target_scale = max(1, math.factorial(n))
        for m in range(n_max + 1):
            target = math.factorial(n) if n == m else 0
            v = q_action(m, family[n], params, cache)
            w = q_action_stirling(m, family[n], params, cache)
            worst["delta"] = max(worst["delta"], abs(v - target) / target_scale)
            worst["stirling"] = max(worst["stirling"], abs(w - target) / target_scale)
            row.append(v.real)
        matrix.append(row)
    residuals = {
        "max_deviation_over_factorial_delta_route": _residual(worst["delta"], 1e-8),
        "max_deviation_over_factorial_stirling_route": _residual(worst["stirling"], 1e-8),
    }
    return params, {"n_max": n_max, "matrix": matrix}, residuals


def cmd_transform(ns):
    if ns.op == "s-inverse":
        u = _load(ns.input, TaylorSeries)
        return None, {"expansion": expansion_to_dict(s_inverse(u))}, {}
    if ns.z is None:
        raise UsageError(f"--op {ns.op} needs --z")
    if ns.op == "s":
        q = _load(ns.input, QExpansion)
        value = s_transform(q, ns.z)
        return q.params, {"z": _pair(ns.z), "value": _pair(value)}, {}
    e = _load(ns.input, CExpansion)
    value = c_transform(e, ns.z)
    family = build_family(e.params, "C", max(len(e.coeffs) - 1, 0))
    direct = c_transform_direct(e, family, ns.z)
    rel = abs(value - direct) / max(1.0, abs(direct))
    results = {"z": _pair(ns.z), "value": _pair(value), "direct_sum": _pair(direct)}
    return e.params, results, {"closed_vs_direct_rel": _residual(rel, 1e-8)}


def cmd_wick(ns):
    a = _load(ns.a, QExpansion)
    if ns.op == "product":
        if ns.b is None:
            raise UsageError("--op product needs --b")
        out = wick_product(a, _load(ns.b, QExpansion))
    elif ns.op == "power":
        if ns.n is None:
            raise UsageError("--op power needs --n")
        out = wick_power(a, ns.n)
    else:
        if ns.terms is None:
            raise UsageError(f"--op {ns.op} needs --terms")
        op = {"exp": wick_exp, "log": wick_log, "inverse": wick_inverse}[ns.op]
        out = op(a, ns.terms)
    return out.params, {"expansion": expansion_to_dict(out)}, {}


def cmd_norm(ns):
    sign = Sign.TEST if ns.sign == "test" else Sign.DISTRIBUTION
    kind = CExpansion if sign is Sign.TEST else QExpansion
    obj = _load(ns.input, kind)
    np_ = NormParams(ns.q, ns.kappa, sign)
    value = test_norm(obj, np_) if sign is Sign.TEST else dist_norm(obj, np_)
    diag = series_diagnostic(obj.coeffs, ns.q, ns.kappa, sign)
    results = {
        "q": ns.q,
        "kappa": ns.kappa,
        "sign": sign.value,
        "norm": value,
        "n_terms": diag.n_terms,
        "divergent": diag.divergent,
        "reason": diag.reason,
    }
    return obj.params, results, {}


def cmd_verify(ns):
    params = _params(ns)
    names = list(SUITES) if ns.suite == "all" else [ns.suite]
    suites = run_suites(names, params, ns.seed)
    residuals = {
        f"{suite}.{c.name}": _residual(c.residual, c.threshold)
        for suite, checks in suites.items()
        for c in checks
    }
    return params, {"suites": names, "seed": ns.seed}, residuals


# -- plumbing -----------------------------------------------------------------


def _add_cell(p, defaults=False):
    p.add_argument("--lambda", dest="lam", type=float, required=not defaults, default=1.0 if defaults else None)
    p.add_argument("--beta", type=float, required=not defaults, default=1.0 if defaults else None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fpoisson", description="Fractional Poisson analysis toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pmf", help="probability mass function table")
    _add_cell(p)
    p.add_argument("--k-max", type=int, default=50)
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("moments", help="moments in closed form, optionally against direct sums")
    _add_cell(p)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("appell", help="coefficients of A_n or C_n")
    _add_cell(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=[k.value for k in Kind], default="C")
    p.add_argument("--basis", choices=["monomial", "falling"], default="monomial")
    p.set_defaults(func=cmd_appell)

    p = sub.add_parser("pair", help="biorthogonality matrix <<C_n, Q_m>>")
    _add_cell(p)
    p.add_argument("--n-max", type=int, default=8)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("transform", help="S-, C- and inverse S-transform")
    p.add_argument("--op", choices=["s", "c", "s-inverse"], required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--z", type=_complex_arg)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("wick", help="Wick algebra on Q-expansions")
    p.add_argument("--op", choices=["product", "power", "exp", "log", "inverse"], required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b")
    p.add_argument("--n", type=int, help="exponent for --op power")
    p.add_argument("--terms", type=int, help="truncation length for exp, log, inverse")
    p.set_defaults(func=cmd_wick)

    p = sub.add_parser("norm", help="Hilbert norm of an expansion")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--sign", choices=["test", "dist"], required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("verify", help="run invariant suites for one (lambda, beta)")
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    _add_cell(p)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)
    return parser


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(doc: dict, stream) -> None:
    json.dump(_jsonable(doc), stream, indent=2)
    stream.write("\n")


def run(argv: Sequence[str] | None = None, stream=None) -> int:
    stream = sys.stdout if stream is None else stream
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        params, results, residuals = ns.func(ns)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"fpoisson {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, ArithmeticError, ValueError) as exc:
        doc = {
            "params": None,
            "results": None,
            "residuals": {},
            "status": "error",
            "diagnostic": {"type": type(exc).__name__, "message": str(exc)},
        }
        _emit(doc, stream)
        return EXIT_NUMERICAL
    failed = [k for k, r in residuals.items() if r["pass"] is False]
    doc = {
        "params": params.as_dict() if params is not None else None,
        "results": results,
        "residuals": residuals,
        "status": "fail" if failed else "pass",
    }
    if failed:
        doc["failed"] = failed
    _emit(doc, stream)
    return EXIT_SUITE if failed else EXIT_OK


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()

"""Coefficient-sequence carriers shared across modules, plus their JSON
interchange format.

A file looks like::

    {"params": {"lambda": 1.0, "beta": 0.5}, "basis": "Q",
     "coeffs": [[1.0, 0.0], [0.5, -0.25]]}

`params` is omitted (or null) for Taylor series.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .measure import FpmParams

__all__ = [
    "CExpansion",
    "QExpansion",
    "TaylorSeries",
    "DEFAULT_TRUST_RADIUS",
    "ParamsMismatch",
    "common_params",
    "expansion_to_dict",
    "expansion_from_dict",
    "load_expansion",
    "dump_expansion",
]

# |e^z - 1| = 1 at z = ln 2 on the real axis
DEFAULT_TRUST_RADIUS = math.log(2.0)


class ParamsMismatch(ValueError):
    """Two objects tied to different (lambda, beta) were combined."""


def _as_coeffs(values: Iterable) -> tuple[complex, ...]:
    out = tuple(complex(v) for v in values)
    if not out:
        raise ValueError("an expansion needs at least one coefficient")
    return out


@dataclass(frozen=True)
class CExpansion:
    """Test function sum_n phi_n C_n, coefficients against the generalized
    Appell basis for `params`."""

    params: FpmParams
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    @classmethod
    def unit(cls, params: FpmParams, n: int) -> "CExpansion":
        return cls(params, [0] * n + [1])


@dataclass(frozen=True)
class QExpansion:
    """Generalized function sum_n Phi_n Q_n.

    `params` may be None for objects built purely from Taylor data (S-inverse
    images); such expansions pair with anything.
    """

    coeffs: tuple
    params: FpmParams | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    @classmethod
    def unit(cls, n: int, params: FpmParams | None = None) -> "QExpansion":
        return cls([0] * n + [1], params)

    def padded(self, length: int) -> tuple:
        return self.coeffs + (0j,) * max(0, length - len(self.coeffs))

    def __add__(self, other: "QExpansion") -> "QExpansion":
        params = common_params(self.params, other.params)
        n = max(len(self), len(other))
        return QExpansion([a + b for a, b in zip(self.padded(n), other.padded(n))], params)

    def scaled(self, c: complex) -> "QExpansion":
        return QExpansion([c * a for a in self.coeffs], self.params)


def common_params(a: FpmParams | None, b: FpmParams | None) -> FpmParams | None:
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise ParamsMismatch(f"parameter mismatch: {a} vs {b}")


@dataclass(frozen=True)
class TaylorSeries:
    """Truncated power series sum_n u_n z^n around 0."""

    coeffs: tuple
    trust_radius: float = DEFAULT_TRUST_RADIUS

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))
        if not self.trust_radius > 0:
            raise ValueError("trust_radius must be positive")

    def __len__(self):
        return len(self.coeffs)

    def evaluate(self, z: complex) -> tuple[complex, bool]:
        """(value, trusted).  `trusted` is False outside the trust radius."""
        z = complex(z)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc, abs(z) <= self.trust_radius


_BASIS = {"C": CExpansion, "Q": QExpansion, "taylor": TaylorSeries}


def expansion_to_dict(obj) -> dict:
    if isinstance(obj, CExpansion):
        basis = "C"
    elif isinstance(obj, QExpansion):
        basis = "Q"
    elif isinstance(obj, TaylorSeries):
        basis = "taylor"
    else:
        raise TypeError(f"not an expansion: {type(obj).__name__}")
    params = getattr(obj, "params", None)
    out = {
        "params": params.as_dict() if params is not None else None,
        "basis": basis,
        "coeffs": [[c.real, c.imag] for c in obj.coeffs],
    }
    if basis == "taylor":
        out["trust_radius"] = obj.trust_radius
    return out


def _coeff(entry) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, Sequence) and len(entry) == 2:
        return complex(float(entry[0]), float(entry[1]))
    raise ValueError(f"coefficient must be a number or [re, im], got {entry!r}")


def expansion_from_dict(doc: dict):
    basis = doc.get("basis")
    if basis not in _BASIS:
        raise ValueError(f"basis must be one of {sorted(_BASIS)}, got {basis!r}")
    coeffs = [_coeff(c) for c in doc.get("coeffs", [])]
    raw = doc.get("params")
    params = FpmParams(raw["lambda"], raw["beta"]) if raw else None
    if basis == "C":
        if params is None:
            raise ValueError("a C-expansion needs params")
        return CExpansion(params, coeffs)
    if basis == "Q":
        return QExpansion(coeffs, params)
    return TaylorSeries(coeffs, float(doc.get("trust_radius", DEFAULT_TRUST_RADIUS)))


def load_expansion(path: str | Path):
    with open(path) as fh:
        return expansion_from_dict(json.load(fh))


def dump_expansion(obj, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(expansion_to_dict(obj), fh, indent=2)

"""Exact combinatorial kernel: Stirling numbers, partial Bell polynomials,
falling factorials and binomials.

Stirling numbers are Python ints taken from memoized recurrence tables, so
every value is exact.  The first kind is signed: ``s(n, k)`` carries the
factor ``(-1)**(n - k)``.
"""

from __future__ import annotations

import math
import threading
from typing import Sequence

__all__ = [
    "stirling_first",
    "stirling_second",
    "stirling_first_row",
    "stirling_second_row",
    "bell_partial",
    "bell_index_sequences",
    "falling_factorial",
    "falling_factorial_coeffs",
    "binomial",
]

_lock = threading.Lock()
# Row n of each table holds s(n, 0..n) / S(n, 0..n).
_first_rows: list[list[int]] = [[1]]
_second_rows: list[list[int]] = [[1]]


def _extend_tables(n_max: int) -> None:
    with _lock:
        while len(_first_rows) <= n_max:
            n = len(_first_rows) - 1
            prev = _first_rows[n]
            row = [0] * (n + 2)
            for k in range(1, n + 2):
                left = prev[k - 1]
                right = prev[k] if k <= n else 0
                row[k] = left - n * right
            _first_rows.append(row)
        while len(_second_rows) <= n_max:
            n = len(_second_rows) - 1
            prev = _second_rows[n]
            row = [0] * (n + 2)
            for k in range(1, n + 2):
                left = prev[k - 1]
                right = prev[k] if k <= n else 0
                row[k] = k * right + left
            _second_rows.append(row)


def stirling_first(n: int, k: int) -> int:
    """Signed Stirling number of the first kind s(n, k).

    Recurrence s(n+1, k) = s(n, k-1) - n s(n, k), s(0, 0) = 1.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if k > n:
        return 0
    _extend_tables(n)
    return _first_rows[n][k]


def stirling_second(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k).

    Recurrence S(n+1, k) = k S(n, k) + S(n, k-1), S(0, 0) = 1.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if k > n:
        return 0
    _extend_tables(n)
    return _second_rows[n][k]


def stirling_first_row(n: int) -> tuple[int, ...]:
    """(s(n, 0), ..., s(n, n))."""
    _extend_tables(n)
    return tuple(_first_rows[n])


def stirling_second_row(n: int) -> tuple[int, ...]:
    """(S(n, 0), ..., S(n, n))."""
    _extend_tables(n)
    return tuple(_second_rows[n])


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def bell_index_sequences(n: int, k: int):
    """Yield every tuple (j_1, ..., j_{n-k+1}) of nonnegative integers with
    sum j_i = k and sum i*j_i = n.

    Nothing is yielded when no such sequence exists.  For n = k = 0 the
    single empty tuple is produced.
    """
    if n < 0 or k < 0 or k > n:
        return
    length = n - k + 1

    def rec(i: int, parts_left: int, weight_left: int, acc: list[int]):
        # i runs from `length` down to 1; remaining parts must be of size <= i
        if i == 0:
            if parts_left == 0 and weight_left == 0:
                yield tuple(reversed(acc))
            return
        # parts of size i can absorb at most weight_left // i
        max_j = min(parts_left, weight_left // i)
        for j in range(max_j, -1, -1):
            rest_parts = parts_left - j
            rest_weight = weight_left - i * j
            # remaining parts each have size between 1 and i-1
            if rest_parts > rest_weight or rest_weight > rest_parts * (i - 1):
                continue
            acc.append(j)
            yield from rec(i - 1, rest_parts, rest_weight, acc)
            acc.pop()

    if length == 0:
        return
    yield from rec(length, k, n, [])


def _bell_weight(n: int, js: Sequence[int]) -> int:
    # n! / prod(j_i! (i!)^{j_i}), always an integer
    denom = 1
    for i, j in enumerate(js, start=1):
        if j:
            denom *= math.factorial(j) * math.factorial(i) ** j
    return math.factorial(n) // denom


def bell_partial(n: int, k: int, args: Sequence):
    """Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}).

    Evaluated by enumerating index sequences.  The argument values may be any
    ring elements closed under ``*`` and ``+`` (int, float, complex,
    Fraction, mpmath numbers); the combinatorial weight is applied as an
    exact integer.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if k > n:
        if len(args) != 0:
            raise ValueError(f"B_{{{n},{k}}} takes no arguments, got {len(args)}")
        return 0
    if n == 0 and len(args) == 0:
        # B_{0,0}() written without its (unused) single argument
        return 1
    if len(args) != n - k + 1:
        raise ValueError(f"B_{{{n},{k}}} takes {n - k + 1} arguments, got {len(args)}")
    total = 0
    for js in bell_index_sequences(n, k):
        term = _bell_weight(n, js)
        for x, j in zip(args, js):
            if j:
                term = term * x**j
        total = total + term
    return total


def falling_factorial(y, m: int):
    """(y)_m = y (y-1) ... (y-m+1), with (y)_0 = 1."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = 1
    for i in range(m):
        out = out * (y - i)
    return out


def falling_factorial_coeffs(m: int) -> tuple[int, ...]:
    """Monomial coefficients of (x)_m, index = power of x.  These are s(m, k)."""
    return stirling_first_row(m)

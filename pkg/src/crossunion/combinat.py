"""Exact binomial arithmetic, plus the real-argument extension C(x, k)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Real = Union[int, float, Fraction]

BISECTION_STEPS = 200


class BinomTable:
    """Pascal triangle of exact integers C(a, b) for 0 <= b <= a <= n_max."""

    def __init__(self, n_max: int):
        if n_max < 0:
            raise ValueError("n_max must be non-negative")
        self.n_max = n_max
        rows: list[tuple[int, ...]] = [(1,)]
        for a in range(1, n_max + 1):
            prev = rows[-1]
            row = [1] * (a + 1)
            for b in range(1, a):
                row[b] = prev[b - 1] + prev[b]
            rows.append(tuple(row))
        self._rows = tuple(rows)

    def __call__(self, a: int, b: int) -> int:
        if a < 0 or b < 0:
            raise ValueError(f"negative binomial arguments ({a}, {b})")
        if a > self.n_max:
            raise IndexError(f"{a} exceeds table size {self.n_max}")
        if b > a:
            return 0
        return self._rows[a][b]


def binom(a: int, b: int) -> int:
    """C(a, b) for non-negative integers; 0 when b > a."""
    if a < 0 or b < 0:
        raise ValueError(f"negative binomial arguments ({a}, {b})")
    return math.comb(a, b)


def binom_real(x: Real, k: int) -> Real:
    """Falling-factorial binomial x(x-1)...(x-k+1)/k!.

    The result type follows ``x``: a ``Fraction`` or ``int`` argument gives an
    exact rational, a float gives a float.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(x, float):
        value = 1.0
        for i in range(k):
            value *= (x - i) / (i + 1)
        return value
    num = Fraction(1)
    for i in range(k):
        num *= Fraction(x) - i
    return num / math.factorial(k)


def solve_binom_x(m: int, k: int, n: int, upper: float | None = None) -> float:
    """Unique x in [k, upper] with C(x, k) = m, by fixed-length bisection.

    ``upper`` defaults to n - 1, which covers every m <= C(n-1, k).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    hi = float(n - 1 if upper is None else upper)
    if hi < k:
        raise ValueError(f"empty search interval [{k}, {hi}]")
    if m < 1 or m > binom_real(Fraction(hi), k):
        raise ValueError(f"m={m} outside [1, C({hi}, {k})]")
    lo = float(k)
    for _ in range(BISECTION_STEPS):
        mid = (lo + hi) / 2
        if binom_real(mid, k) < m:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2

"""Shadows of uniform families and Lovász's form of the Kruskal-Katona bound."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from .combinat import binom_real, solve_binom_x
from .family import Family

# shadow sizes are compared against ceil(bound - ROUNDING_SLACK)
ROUNDING_SLACK = 1e-9


@dataclass(frozen=True)
class ShadowReport:
    level: int
    shadow_size: int
    lovasz_x: float
    lovasz_bound: float

    @property
    def holds(self) -> bool:
        return self.shadow_size >= math.ceil(self.lovasz_bound - ROUNDING_SLACK)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["holds"] = self.holds
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def shadow(f: Family, level: int) -> Family:
    """All ``level``-subsets contained in some member of f."""
    if not 1 <= level <= f.k:
        raise ValueError(f"shadow level {level} outside [1, {f.k}]")
    current = set(f.sets)
    for _ in range(f.k - level):
        nxt = set()
        for m in current:
            rest = m
            while rest:
                low = rest & -rest
                nxt.add(m ^ low)
                rest ^= low
        current = nxt
    return Family(f.n, level, tuple(current))


def lovasz_check(f: Family, level: int) -> ShadowReport:
    """Compare |shadow(f, level)| with C(x, level) where C(x, k) = |f|.

    x is searched on [k, n], since an arbitrary family may exceed C(n-1, k).
    """
    if not f.sets:
        raise ValueError("Lovász check needs a non-empty family")
    if not 1 <= level <= f.k:
        raise ValueError(f"shadow level {level} outside [1, {f.k}]")
    x = solve_binom_x(len(f), f.k, f.n, upper=f.n)
    bound = binom_real(x, level)
    return ShadowReport(level, len(shadow(f, level)), x, bound)

"""Shifting (the (i, j)-compression) and nested normalization of tuples."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .family import Family, FamilyTuple, elements_of, is_cross_union


@dataclass
class ShiftTrace:
    """The effective (i, j)-shifts applied, in order, and the number of sweeps."""

    applied: list[tuple[int, int]] = field(default_factory=list)
    rounds: int = 0

    def to_json(self) -> str:
        return json.dumps({"applied": [list(p) for p in self.applied], "rounds": self.rounds})

    @classmethod
    def from_json(cls, text: str) -> "ShiftTrace":
        data = json.loads(text)
        return cls([tuple(p) for p in data["applied"]], int(data["rounds"]))

    def replay(self, f: Family) -> Family:
        for i, j in self.applied:
            f = shift_ij(f, i, j)
        return f

    def replay_tuple(self, t: FamilyTuple) -> FamilyTuple:
        for i, j in self.applied:
            t = FamilyTuple(tuple(shift_ij(f, i, j) for f in t))
        return t


def shift_ij(f: Family, i: int, j: int) -> Family:
    """Replace j by i in every member containing j but not i, unless the
    result is already a member."""
    if not 1 <= i < j <= f.n:
        raise ValueError(f"need 1 <= i < j <= {f.n}, got ({i}, {j})")
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    members = set(f.sets)
    out = []
    for m in f.sets:
        if m & bj and not m & bi:
            moved = (m & ~bj) | bi
            out.append(m if moved in members else moved)
        else:
            out.append(m)
    return Family(f.n, f.k, tuple(out))


def element_weight(f: Family) -> int:
    """Sum over members of the sum of their elements; drops at every effective shift."""
    return sum(sum(elements_of(m)) for m in f.sets)


def _pairs(n: int) -> Iterable[tuple[int, int]]:
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            yield i, j


def shift_fixpoint(f: Family) -> tuple[Family, ShiftTrace]:
    """Sweep all pairs i < j in lexicographic order until nothing moves."""
    trace = ShiftTrace()
    changed = True
    while changed:
        changed = False
        trace.rounds += 1
        for i, j in _pairs(f.n):
            g = shift_ij(f, i, j)
            if g != f:
                trace.applied.append((i, j))
                f = g
                changed = True
    return f, trace


def shift_tuple_fixpoint(t: FamilyTuple) -> tuple[FamilyTuple, ShiftTrace]:
    """Apply each (i, j)-shift to all families at once, sweeping to a fixpoint."""
    trace = ShiftTrace()
    fams = list(t.families)
    n = t.n
    changed = True
    while changed:
        changed = False
        trace.rounds += 1
        for i, j in _pairs(n):
            moved = [shift_ij(f, i, j) for f in fams]
            if moved != fams:
                trace.applied.append((i, j))
                fams = moved
                changed = True
    return FamilyTuple(tuple(fams)), trace


def lower_covers(mask: int, n: int) -> list[int]:
    """Sets obtained by moving one element x down to x - 1 when x - 1 is absent."""
    out = []
    for x in range(1, n):
        if (mask >> x) & 1 and not (mask >> (x - 1)) & 1:
            out.append(mask ^ (1 << x) ^ (1 << (x - 1)))
    return out


def is_shifted(f: Family) -> bool:
    # domination is generated by single down-moves, so checking covers suffices
    members = set(f.sets)
    return all(c in members for m in f.sets for c in lower_covers(m, f.n))


def nest_normalize(t: FamilyTuple) -> FamilyTuple:
    """Turn a cross-union tuple into a nested one with the same total size.

    Shifts all families jointly to a fixpoint, then replaces each pair
    (F_u, F_v), u < v, by (F_u & F_v, F_u | F_v) until no pair changes.
    """
    if t.k is None:
        raise ValueError("nesting needs a common set size")
    if not is_cross_union(t):
        raise ValueError("input tuple is not cross-union")
    shifted, _ = shift_tuple_fixpoint(t)
    fams = [set(f.sets) for f in shifted.families]
    size = len(fams)
    changed = True
    while changed:
        changed = False
        for u in range(size):
            for v in range(u + 1, size):
                lo, hi = fams[u] & fams[v], fams[u] | fams[v]
                if lo != fams[u] or hi != fams[v]:
                    fams[u], fams[v] = lo, hi
                    changed = True
    n = t.n
    return FamilyTuple(
        tuple(Family(n, f.k, tuple(g)) for f, g in zip(shifted.families, fams))
    )

"""Bitmask set families and the union-type properties of family tuples.

A k-subset of [n] is an int whose bit ``i - 1`` marks element ``i``.  With
this encoding, integer order on masks is exactly colexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .combinat import binom

MAX_N = 64
ENUM_MAX_N = 24


class FamilyFormatError(ValueError):
    """Raised on malformed family text."""


def mask_of(elements: Iterable[int]) -> int:
    """Mask of a collection of 1-based elements."""
    mask = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"element {e} is not positive")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    """Sorted 1-based elements of a mask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def k_subsets(n: int, k: int, ground: Optional[int] = None) -> list[int]:
    """All k-subsets of [n] (or of the ground mask) in colex order."""
    elems = elements_of(full_mask(n) if ground is None else ground)
    return sorted(mask_of(c) for c in combinations(elems, k))


@dataclass(frozen=True)
class Family:
    """A k-uniform family over [n], stored as a colex-sorted tuple of masks."""

    n: int
    k: int
    sets: tuple[int, ...] = ()

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"universe size {self.n} outside [1, {MAX_N}]")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"set size {self.k} outside [0, {self.n}]")
        full = full_mask(self.n)
        clean = tuple(sorted(set(self.sets)))
        for m in clean:
            if m & ~full or popcount(m) != self.k:
                raise ValueError(f"{elements_of(m)} is not a {self.k}-subset of [{self.n}]")
        object.__setattr__(self, "sets", clean)

    @classmethod
    def from_sets(cls, n: int, k: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls(n, k, tuple(mask_of(s) for s in sets))

    @classmethod
    def complete(cls, n: int, k: int, ground: Optional[int] = None) -> "Family":
        """C(ground, k), with ground defaulting to [n]."""
        return cls(n, k, tuple(k_subsets(n, k, ground)))

    @classmethod
    def star(cls, n: int, k: int, i: int) -> "Family":
        """All k-sets avoiding element i."""
        return cls.complete(n, k, full_mask(n) & ~(1 << (i - 1)))

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, mask: int) -> bool:
        return mask in self._members

    @property
    def _members(self) -> frozenset:
        # cached lazily; the dataclass is frozen so bypass __setattr__
        try:
            return self.__dict__["_member_cache"]
        except KeyError:
            members = frozenset(self.sets)
            object.__setattr__(self, "_member_cache", members)
            return members

    def as_lists(self) -> list[list[int]]:
        return [elements_of(m) for m in self.sets]

    def to_text(self) -> str:
        lines = [f"n={self.n} k={self.k}"]
        lines.extend(",".join(map(str, elements_of(m))) for m in self.sets)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Family":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise FamilyFormatError("empty input")
        header = dict(tok.split("=", 1) for tok in lines[0].split() if "=" in tok)
        try:
            n, k = int(header["n"]), int(header["k"])
        except (KeyError, ValueError) as exc:
            raise FamilyFormatError(f"bad header {lines[0]!r}") from exc
        sets = []
        for ln in lines[1:]:
            try:
                elems = [int(tok) for tok in ln.split(",")]
            except ValueError as exc:
                raise FamilyFormatError(f"bad set line {ln!r}") from exc
            if elems != sorted(set(elems)) or len(elems) != k:
                raise FamilyFormatError(f"set line {ln!r} is not {k} increasing elements")
            if elems and (elems[0] < 1 or elems[-1] > n):
                raise FamilyFormatError(f"set line {ln!r} leaves [1, {n}]")
            sets.append(mask_of(elems))
        if len(set(sets)) != len(sets):
            raise FamilyFormatError("duplicate sets")
        return cls(n, k, tuple(sets))


@dataclass(frozen=True)
class FamilyTuple:
    """An ordered tuple (F_0, ..., F_s) of non-empty families over one universe.

    Families of different set sizes are accepted; ``k`` is then ``None``.
    """

    families: tuple[Family, ...]

    def __post_init__(self):
        fams = tuple(self.families)
        object.__setattr__(self, "families", fams)
        if len(fams) < 2:
            raise ValueError("a family tuple needs at least two families")
        if len({f.n for f in fams}) != 1:
            raise ValueError("families live on different universes")
        if any(len(f) == 0 for f in fams):
            raise ValueError("families in a tuple must be non-empty")

    @property
    def n(self) -> int:
        return self.families[0].n

    @property
    def k(self) -> Optional[int]:
        ks = {f.k for f in self.families}
        return ks.pop() if len(ks) == 1 else None

    @property
    def s(self) -> int:
        return len(self.families) - 1

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.families)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def __len__(self) -> int:
        return len(self.families)

    def __iter__(self):
        return iter(self.families)

    def __getitem__(self, i):
        return self.families[i]

    def is_nested(self) -> bool:
        return all(
            set(a.sets) <= set(b.sets) for a, b in zip(self.families, self.families[1:])
        )


def _as_mask_lists(families: Sequence) -> list[tuple[int, ...]]:
    return [tuple(f.sets) if isinstance(f, Family) else tuple(f) for f in families]


def reachable_unions(families: Sequence) -> set[int]:
    """All masks A_0 | ... | A_s over transversals.

    Equivalent to memoizing the recursion on (family index, accumulated union).
    """
    reach = {0}
    for fam in _as_mask_lists(families):
        reach = {u | a for u in reach for a in fam}
    return reach


def covering_transversal(families: Sequence, n: int) -> Optional[tuple[int, ...]]:
    """A transversal (A_0, ..., A_s) whose union is [n], or None."""
    full = full_mask(n)
    fams = _as_mask_lists(families)
    if any(not f for f in fams):
        return None
    layers: list[dict[int, tuple[int, int]]] = []
    reach: dict[int, tuple[int, int]] = {0: (0, 0)}
    for fam in fams:
        nxt: dict[int, tuple[int, int]] = {}
        for u in reach:
            for a in fam:
                v = u | a
                if v not in nxt:
                    nxt[v] = (u, a)
        layers.append(nxt)
        reach = nxt
    if full not in reach:
        return None
    picks = []
    cur = full
    for layer in reversed(layers):
        prev, a = layer[cur]
        picks.append(a)
        cur = prev
    return tuple(reversed(picks))


def is_cross_union(families: Sequence, n: Optional[int] = None) -> bool:
    """True iff no transversal of the families covers [n].

    Accepts a FamilyTuple or any sequence of Families (mixed set sizes allowed),
    or of raw mask collections when ``n`` is given.
    """
    if isinstance(families, FamilyTuple):
        n = families.n
        families = families.families
    elif n is None:
        n = families[0].n
    full = full_mask(n)
    fams = _as_mask_lists(families)
    if any(not f for f in fams):
        return True
    reach = {0}
    for fam in fams[:-1]:
        reach = {u | a for u in reach for a in fam}
        if full in reach:
            return False
    last = fams[-1]
    for u in reach:
        need = full & ~u
        for a in last:
            if need & ~a == 0:
                return False
    return True


def is_cross_intersecting(families: Sequence) -> bool:
    """True iff every transversal has a common element (direct enumeration)."""
    fams = _as_mask_lists(families.families if isinstance(families, FamilyTuple) else families)
    common = {-1}
    for fam in fams:
        common = {c & a for c in common for a in fam}
    return 0 not in common


def complement_dual(f: Family) -> Family:
    full = full_mask(f.n)
    return Family(f.n, f.n - f.k, tuple(full & ~m for m in f.sets))


def is_r_wise_union(f: Family, r: int) -> bool:
    """True iff no r members of f (repetition allowed) cover [n]."""
    if r < 1:
        raise ValueError("r must be at least 1")
    return is_cross_union([f] * r, f.n)


def u_property(t, q: int) -> bool:
    """Property U(s+1, q): every transversal union has at most q elements."""
    fams = t.families if isinstance(t, FamilyTuple) else t
    n = fams[0].n
    if not 0 <= q <= n:
        raise ValueError(f"q={q} outside [0, {n}]")
    if q == n:
        return True
    return max(popcount(u) for u in reachable_unions(fams)) <= q


def star_signature(f: Family) -> Optional[int]:
    """The element i with f == C([n] minus {i}, k), or None."""
    if not f.sets:
        return None
    union = 0
    for m in f.sets:
        union |= m
    missing = elements_of(full_mask(f.n) & ~union)
    if len(missing) != 1:
        return None
    i = missing[0]
    return i if len(f) == binom(f.n - 1, f.k) else None

"""Permutation averaging bound for cross-union tuples of mixed set sizes.

The exact check needs only sizes and the cross-union predicate; random
permutations appear only in the Monte Carlo estimator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from .combinat import binom
from .family import Family, covering_transversal, elements_of, full_mask, k_subsets

SHARD_TRIALS = 1 << 14


class NotCrossUnionError(ValueError):
    """The families admit a covering transversal, kept in ``witness``."""

    def __init__(self, witness: tuple[int, ...]):
        self.witness = witness
        sets = [elements_of(m) for m in witness]
        super().__init__(f"families are not cross-union: {sets} covers the ground set")


@dataclass(frozen=True)
class CircleReport:
    lhs: Fraction
    s: int
    tight: bool
    witness: Optional[tuple[int, ...]] = field(default=None)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.s

    def to_dict(self) -> dict:
        return {
            "lhs": str(self.lhs),
            "s": self.s,
            "tight": self.tight,
            "holds": self.holds,
            "witness": None if self.witness is None else [elements_of(m) for m in self.witness],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def normalized_sum(gs: Sequence[Family]) -> Fraction:
    """Sum of |G_i| / C(n, k_i) as an exact rational."""
    return sum((Fraction(len(g), binom(g.n, g.k)) for g in gs), Fraction(0))


def circle_check(gs: Sequence[Family]) -> CircleReport:
    """Exact comparison of sum |G_i|/C(n, k_i) with s for a cross-union tuple."""
    if len(gs) < 2:
        raise ValueError("need at least two families")
    n = gs[0].n
    if any(g.n != n for g in gs):
        raise ValueError("families live on different universes")
    if sum(g.k for g in gs) < n:
        raise ValueError("set sizes must sum to at least n")
    witness = covering_transversal(gs, n)
    if witness is not None:
        raise NotCrossUnionError(witness)
    s = len(gs) - 1
    lhs = normalized_sum(gs)
    return CircleReport(lhs, s, lhs == s)


def _validate_cover(gs: Sequence[Family], cover: Sequence[Sequence[int]]) -> list[int]:
    n = gs[0].n
    if len(cover) != len(gs):
        raise ValueError("cover needs one set per family")
    masks = []
    union = 0
    for g, a in zip(gs, cover):
        elems = sorted(set(a))
        if len(elems) != g.k or elems[0] < 1 or elems[-1] > n:
            raise ValueError(f"cover set {list(a)} is not a {g.k}-subset of [{n}]")
        m = 0
        for e in elems:
            m |= 1 << (e - 1)
        masks.append(m)
        union |= m
    if union != full_mask(n):
        raise ValueError("cover sets do not cover the ground set")
    return masks


def _shard_hits(gs, cover_elems, members, trials, seed_seq) -> int:
    n = gs[0].n
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    perms = rng.permuted(np.tile(np.arange(n, dtype=np.int64), (trials, 1)), axis=1)
    bits = np.left_shift(np.int64(1), perms)
    hits = 0
    for elems, member in zip(cover_elems, members):
        if member.size == 0:
            continue
        images = bits[:, [e - 1 for e in elems]].sum(axis=1)
        hits += int(np.isin(images, member).sum())
    return hits


def circle_expectation(
    gs: Sequence[Family],
    cover: Sequence[Sequence[int]],
    trials: int,
    seed: int,
) -> float:
    """Monte Carlo estimate of E[sum_i 1{alpha(A_i) in G_i}] over uniform permutations.

    Trials are split into fixed-size shards seeded by ``SeedSequence(seed).spawn``,
    so the estimate depends only on (seed, trials).  Empty families are allowed
    and contribute zero.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    masks = _validate_cover(gs, cover)
    cover_elems = [elements_of(m) for m in masks]
    members = [np.array(g.sets, dtype=np.int64) for g in gs]
    shards = -(-trials // SHARD_TRIALS)
    seeds = np.random.SeedSequence(seed).spawn(shards)
    hits = 0
    for idx, seq in enumerate(seeds):
        size = min(SHARD_TRIALS, trials - idx * SHARD_TRIALS)
        hits += _shard_hits(gs, cover_elems, members, size, seq)
    return hits / trials


def _check_equality_hypotheses(gs: Sequence[Family]) -> tuple[int, int, int]:
    s = len(gs) - 1
    if s < 2:
        raise ValueError("the equality case needs s >= 2")
    k = gs[0].k
    n = gs[0].n
    if any(g.k != k or g.n != n for g in gs):
        raise ValueError("families must share n and k")
    if n != (s + 1) * k:
        raise ValueError(f"need n = (s+1)k, got n={n}, k={k}, s={s}")
    if not gs[0].sets:
        raise ValueError("G_0 must be non-empty")
    if any(not set(a.sets) <= set(b.sets) for a, b in zip(gs, gs[1:])):
        raise ValueError("families must be nested G_0 <= G_1 <= ... <= G_s")
    return n, k, s


def equality_case_check(gs: Sequence[Family]) -> bool:
    """For a nested cross-union tuple at n = (s+1)k: tight implies all equal."""
    _check_equality_hypotheses(gs)
    report = circle_check(gs)
    if not report.tight:
        return True
    return all(g.sets == gs[0].sets for g in gs)


def ordered_partitions(n: int, k: int):
    """Ordered partitions of [n] into n/k blocks of size k, as mask tuples."""
    if n % k:
        raise ValueError("k must divide n")

    def rec(rest: int, blocks: tuple[int, ...]):
        if rest == 0:
            yield blocks
            return
        for b in k_subsets(n, k, rest):
            yield from rec(rest & ~b, blocks + (b,))

    yield from rec(full_mask(n), ())


def partition_claim_holds(gs: Sequence[Family]) -> bool:
    """For a tight nested tuple at n = (s+1)k: every ordered partition
    (B_0, ..., B_s) of [n] into k-sets has exactly one i with B_i outside G_i."""
    n, k, _ = _check_equality_hypotheses(gs)
    members = [set(g.sets) for g in gs]
    for blocks in ordered_partitions(n, k):
        misses = sum(1 for b, m in zip(blocks, members) if b not in m)
        if misses != 1:
            return False
    return True


def exact_permutation_average(gs: Sequence[Family], cover: Sequence[Sequence[int]]) -> Fraction:
    """E[X] by enumerating all n! permutations; only for tiny n."""
    masks = _validate_cover(gs, cover)
    n = gs[0].n
    members = [set(g.sets) for g in gs]
    total = 0
    count = 0
    for perm in permutations(range(n)):
        count += 1
        for m, mem in zip(masks, members):
            img = 0
            for e in elements_of(m):
                img |= 1 << perm[e - 1]
            total += img in mem
    return Fraction(total, count)

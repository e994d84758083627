"""Certified maximization of |F_0| + ... + |F_s| over non-empty cross-union tuples.

Two independent engines:

* ``max_sum_search`` works in the reduced space of nested chains
  G_0 <= ... <= G_s of shifted families.  A chain is encoded by a level
  h(A) in {0, ..., s+1} per k-set A (A lies in G_i iff h(A) <= i), and
  shiftedness makes h monotone under domination.  Sets are assigned in colex
  order, which extends domination, so every lower cover is fixed before the
  set itself.
* ``exhaustive_max_sum`` searches all tuples with no structural assumption.
  It starts from the complete tuple and branches on which cell (i, A) of a
  covering transversal to delete, with a packing of cell-disjoint covering
  transversals as the lower bound on further deletions.
"""

from __future__ import annotations

import json
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .combinat import binom
from .compression import lower_covers
from .family import (
    ENUM_MAX_N,
    Family,
    FamilyTuple,
    full_mask,
    is_cross_union,
    k_subsets,
    popcount,
    star_signature,
)

ALL_BOUNDS = frozenset({"circle", "rwise", "g0"})
MAX_BINOM = 40


class GuardError(ValueError):
    """Parameters outside the supported range or outside a hypothesis."""


@dataclass(frozen=True)
class BoundContext:
    """Bounds valid for every cross-union tuple with sum at least the star value."""

    n: int
    k: int
    s: int
    circle_bound: Fraction  # on sum |G_i| / C(n, k)
    rwise_bound: int  # on |G_0|, which is (s+1)-wise union in a nested chain
    g0_lower: int  # on |G_0| once the sum reaches (s+1) C(n-1, k)
    outer_cap: int  # on |G_1| + ... + |G_s|

    @classmethod
    def for_params(cls, n: int, k: int, s: int) -> "BoundContext":
        c = binom(n, k)
        return cls(
            n,
            k,
            s,
            circle_bound=Fraction(s),
            rwise_bound=binom(n - 1, k),
            g0_lower=(s + 1) * binom(n - 1, k) - s * c + binom(k * s, k),
            outer_cap=s * c - binom(k * s, k),
        )

    def to_dict(self) -> dict:
        return {
            "circle_bound": str(self.circle_bound),
            "rwise_bound": self.rwise_bound,
            "g0_lower": self.g0_lower,
            "outer_cap": self.outer_cap,
        }


@dataclass
class SearchResult:
    n: int
    k: int
    s: int
    max_sum: int
    certificates: list[FamilyTuple] = field(default_factory=list)
    star_certificates: list[FamilyTuple] = field(default_factory=list)
    nodes_explored: int = 0
    nodes_pruned: int = 0
    nodes_infeasible: int = 0
    bounds_used: tuple[str, ...] = ()
    space: str = "shifted-nested"
    bounds: Optional[BoundContext] = None

    @property
    def star_value(self) -> int:
        return (self.s + 1) * binom(self.n - 1, self.k)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "s": self.s,
            "max_sum": self.max_sum,
            "star_value": self.star_value,
            "space": self.space,
            "certificates": [tuple_to_text(t) for t in self.certificates],
            "star_certificates": [tuple_to_text(t) for t in self.star_certificates],
            "nodes_explored": self.nodes_explored,
            "nodes_pruned": self.nodes_pruned,
            "nodes_infeasible": self.nodes_infeasible,
            "bounds_used": list(self.bounds_used),
            "bounds": None if self.bounds is None else self.bounds.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def tuple_to_text(t: FamilyTuple) -> list[str]:
    return [f.to_text() for f in t.families]


def star_tuple(n: int, k: int, s: int, i: int) -> FamilyTuple:
    return FamilyTuple(tuple(Family.star(n, k, i) for _ in range(s + 1)))


def check_params(n: int, k: int, s: int, max_binom: int = MAX_BINOM) -> None:
    if k < 1 or s < 1:
        raise GuardError("need k >= 1 and s >= 1")
    if not s * k < n <= (s + 1) * k:
        raise GuardError(f"need sk < n <= (s+1)k, got n={n}, k={k}, s={s}")
    if n > ENUM_MAX_N:
        raise GuardError(f"n={n} exceeds the enumeration limit {ENUM_MAX_N}")
    if binom(n, k) > max_binom:
        raise GuardError(f"C({n},{k}) = {binom(n, k)} exceeds the budget {max_binom}")


# ---------------------------------------------------------------------------
# reduced space: nested chains of shifted families


class _ChainSearch:
    def __init__(self, n, k, s, bounds=ALL_BOUNDS, shifted=True, collect=True, shared=None):
        self.n, self.k, self.s = n, k, s
        self.levels = s + 1  # level s+1 means "in no family"
        self.sets = k_subsets(n, k)
        index = {m: i for i, m in enumerate(self.sets)}
        if shifted:
            self.covers = [[index[c] for c in lower_covers(m, n)] for m in self.sets]
        else:
            self.covers = [[] for _ in self.sets]
        self.shifted = shifted
        self.bounds = frozenset(bounds)
        self.ctx = BoundContext.for_params(n, k, s)
        self.total_cap = s * binom(n, k)
        self.collect = collect
        self.shared = shared
        self.best = (s + 1) * binom(n - 1, k)
        self.h = [0] * len(self.sets)
        self.lbs = [0] * len(self.sets)
        self.fams: list[list[int]] = [[] for _ in range(self.levels)]
        self.counts = [0] * self.levels
        self.found: list[tuple[int, ...]] = []
        self.nodes = self.pruned = self.infeasible = 0

    def _incumbent(self) -> int:
        if self.shared is not None and self.shared.value > self.best:
            self.best = self.shared.value
            self.found = []
        return self.best

    def _raise_incumbent(self, value: int) -> None:
        self.best = value
        if self.shared is not None:
            with self.shared.get_lock():
                if value > self.shared.value:
                    self.shared.value = value

    def _upper_bound(self, j: int) -> tuple[int, int]:
        """Upper bound on the final sum, and on the final |G_0|."""
        h, lbs, covers = self.h, self.lbs, self.covers
        optimistic = [0] * self.levels
        for x in range(j, len(self.sets)):
            lb = 0
            for c in covers[x]:
                v = h[c] if c < j else lbs[c]
                if v > lb:
                    lb = v
            lbs[x] = lb
            for i in range(lb, self.levels):
                optimistic[i] += 1
        sizes = [c + o for c, o in zip(self.counts, optimistic)]
        g0 = sizes[0]
        if "rwise" in self.bounds:
            g0 = min(g0, self.ctx.rwise_bound)
        total = g0 + sum(sizes[1:])
        if "circle" in self.bounds:
            total = min(total, self.total_cap)
        if "g0" in self.bounds:
            total = min(total, g0 + self.ctx.outer_cap)
        return total, g0

    def run(self, prefix: tuple[int, ...] = ()) -> None:
        for j, level in enumerate(prefix):
            if not self._assign(j, level):
                self.infeasible += 1
                return
        self._dfs(len(prefix))

    def _assign(self, j: int, level: int) -> bool:
        self.h[j] = level
        m = self.sets[j]
        for i in range(level, self.levels):
            self.fams[i].append(m)
            self.counts[i] += 1
        return level == self.levels or is_cross_union(self.fams, self.n)

    def _unassign(self, j: int) -> None:
        for i in range(self.h[j], self.levels):
            self.fams[i].pop()
            self.counts[i] -= 1

    def _dfs(self, j: int) -> None:
        self.nodes += 1
        best = self._incumbent()
        if j == len(self.sets):
            total = sum(self.counts)
            if total > best:
                self._raise_incumbent(total)
                self.found = []
            if total >= self.best and self.collect:
                self.found.append(tuple(self.h))
            return
        ub, g0 = self._upper_bound(j)
        if ub < best or (not self.collect and ub <= best):
            self.pruned += 1
            return
        if "g0" in self.bounds and g0 < self.ctx.g0_lower:
            self.pruned += 1
            return
        if j == 0:
            choices = [0]  # G_0 is non-empty, so it holds the colex-first set
        else:
            choices = range(self.lbs[j], self.levels + 1)
        for level in choices:
            if self._assign(j, level):
                self._dfs(j + 1)
            else:
                self.infeasible += 1
            self._unassign(j)

    def chain_of(self, h: tuple[int, ...]) -> FamilyTuple:
        return FamilyTuple(
            tuple(
                Family(self.n, self.k, tuple(m for m, lv in zip(self.sets, h) if lv <= i))
                for i in range(self.levels)
            )
        )


_SHARED = None


def _init_worker(shared):
    global _SHARED
    _SHARED = shared


def _run_subtree(args):
    n, k, s, bounds, shifted, collect, prefix = args
    search = _ChainSearch(n, k, s, bounds, shifted, collect, shared=_SHARED)
    search.run(tuple(prefix))
    return search.best, search.found, search.nodes, search.pruned, search.infeasible


def _prefixes(n, k, s, shifted, depth):
    """Feasible level assignments of the first ``depth`` sets (monotone only)."""
    probe = _ChainSearch(n, k, s, shifted=shifted)
    out = []

    def rec(j, acc):
        if j == depth:
            out.append(tuple(acc))
            return
        lb = max((acc[c] for c in probe.covers[j]), default=0)
        for level in ([0] if j == 0 else range(lb, s + 2)):
            rec(j + 1, acc + [level])

    rec(0, [])
    return out


def max_sum_search(
    n: int,
    k: int,
    s: int,
    bounds: Iterable[str] = ALL_BOUNDS,
    collect: bool = True,
    threads: int = 1,
    shifted: bool = True,
    max_binom: int = MAX_BINOM,
) -> SearchResult:
    """Exact maximum of the sum over nested (and, by default, shifted) chains.

    Shifting and nesting both preserve sizes and the cross-union property, so
    the reduced maximum equals the unrestricted one.  With ``collect`` every
    maximizing chain is returned; the star tuples are added separately when
    they attain the maximum.
    """
    check_params(n, k, s, max_binom)
    bounds = frozenset(bounds)
    unknown = bounds - ALL_BOUNDS
    if unknown:
        raise ValueError(f"unknown bounds {sorted(unknown)}")
    if threads <= 1:
        search = _ChainSearch(n, k, s, bounds, shifted, collect)
        search.run(())
        best, found = search.best, search.found
        nodes, pruned, infeasible = search.nodes, search.pruned, search.infeasible
    else:
        best, found, nodes, pruned, infeasible = _parallel(n, k, s, bounds, shifted, collect, threads)
    probe = _ChainSearch(n, k, s, shifted=shifted)
    certs = sorted({probe.chain_of(h) for h in found}, key=_tuple_key)
    result = SearchResult(
        n, k, s, best, certs,
        nodes_explored=nodes,
        nodes_pruned=pruned,
        nodes_infeasible=infeasible,
        bounds_used=tuple(sorted(bounds)),
        space="shifted-nested" if shifted else "nested",
        bounds=BoundContext.for_params(n, k, s),
    )
    if best == result.star_value:
        stars = [star_tuple(n, k, s, i) for i in range(1, n + 1)]
        result.star_certificates = [t for t in stars if is_cross_union(t)]
    return result


def _parallel(n, k, s, bounds, shifted, collect, threads):
    depth = min(len(k_subsets(n, k)), 4)
    jobs = [(n, k, s, bounds, shifted, collect, p) for p in _prefixes(n, k, s, shifted, depth)]
    shared = mp.Value("q", (s + 1) * binom(n - 1, k))
    with ProcessPoolExecutor(threads, initializer=_init_worker, initargs=(shared,)) as pool:
        parts = list(pool.map(_run_subtree, jobs))
    best = max(p[0] for p in parts)
    found = [h for p in parts if p[0] == best for h in p[1]]
    if not collect:
        found = found[:1]
    return (
        best,
        found,
        sum(p[2] for p in parts),
        sum(p[3] for p in parts),
        sum(p[4] for p in parts),
    )


def _tuple_key(t: FamilyTuple):
    return tuple(f.sets for f in t.families)


# ---------------------------------------------------------------------------
# unrestricted space: deletion branch-and-bound


def _find_witness(alive: list[set[int]], n: int, q: int) -> Optional[tuple[int, ...]]:
    """A transversal whose union has more than q elements, or None."""
    layers = []
    reach: dict[int, None] = {0: None}
    for fam in alive:
        nxt: dict[int, tuple[int, int]] = {}
        for u in reach:
            for a in fam:
                v = u | a
                if v not in nxt:
                    nxt[v] = (u, a)
        layers.append(nxt)
        reach = nxt
    if q == n - 1:
        full = full_mask(n)
        cur = full if full in reach else None
    else:
        cur = next((v for v in reach if popcount(v) > q), None)
    if cur is None:
        return None
    picks = []
    for layer in reversed(layers):
        cur, a = layer[cur]
        picks.append(a)
    return tuple(reversed(picks))


@dataclass
class ExhaustiveResult:
    n: int
    k: int
    s: int
    q: int
    max_sum: int
    maximizers: list[FamilyTuple]
    nodes: int


class _DeletionSearch:
    def __init__(self, n, k, s, q):
        self.n, self.k, self.s, self.q = n, k, s, q
        self.sets = k_subsets(n, k)
        self.alive = [set(self.sets) for _ in range(s + 1)]
        self.kept = [set() for _ in range(s + 1)]
        self.nodes = 0

    def _packing(self) -> int:
        tmp = [set(a) for a in self.alive]
        count = 0
        while True:
            w = _find_witness([sorted(t) for t in tmp], self.n, self.q)
            if w is None:
                return count
            count += 1
            for i, a in enumerate(w):
                tmp[i].discard(a)

    def minimize(self, budget: int, enumerate_all: bool):
        """Smallest deletion count, given that ``budget`` deletions are achievable.

        With ``enumerate_all``, collects every solution using exactly ``budget``
        deletions instead; ``budget`` must then be the optimum.
        """
        self.budget = budget
        self.enumerate_all = enumerate_all
        self.solutions: list[list[frozenset]] = []
        self.best = budget
        self._dfs(0)
        return self.best

    def _dfs(self, removed: int) -> None:
        self.nodes += 1
        w = _find_witness([sorted(a) for a in self.alive], self.n, self.q)
        if w is None:
            if self.enumerate_all:
                if removed == self.budget:
                    self.solutions.append([frozenset(a) for a in self.alive])
            elif removed < self.best:
                self.best = removed
            return
        lower = removed + self._packing()
        if (self.enumerate_all and lower > self.budget) or (
            not self.enumerate_all and lower >= self.best
        ):
            return
        marked = []
        for i, a in enumerate(w):
            if a in self.kept[i] or len(self.alive[i]) == 1:
                continue
            self.alive[i].discard(a)
            self._dfs(removed + 1)
            self.alive[i].add(a)
            self.kept[i].add(a)
            marked.append((i, a))
        for i, a in marked:
            self.kept[i].discard(a)


def exhaustive_max_sum(
    n: int,
    k: int,
    s: int,
    q: Optional[int] = None,
    enumerate_all: bool = False,
    max_binom: int = MAX_BINOM,
) -> ExhaustiveResult:
    """Maximum sum over all non-empty tuples with property U(s+1, q).

    q defaults to n - 1, the cross-union case.  No shifting, nesting or
    problem-specific bound is used.  With ``enumerate_all`` every maximizing
    tuple is listed.
    """
    if n > ENUM_MAX_N or binom(n, k) > max_binom:
        raise GuardError(f"(n, k) = ({n}, {k}) is beyond the enumeration budget")
    if k < 1 or s < 1 or k > n:
        raise GuardError("need 1 <= k <= n and s >= 1")
    q = n - 1 if q is None else q
    if not 0 <= q <= n:
        raise GuardError(f"q={q} outside [0, {n}]")
    if q < k:
        raise GuardError(f"no tuple of {k}-sets has property U(s+1, {q})")
    cells = (s + 1) * binom(n, k)
    # feasible baselines: s+1 copies of {[k]}, and for q = n-1 the star tuple
    baseline = cells - (s + 1)
    if q == n - 1:
        baseline = min(baseline, cells - (s + 1) * binom(n - 1, k))
    search = _DeletionSearch(n, k, s, q)
    best = search.minimize(baseline, enumerate_all=False)
    maximizers = []
    if enumerate_all:
        enum = _DeletionSearch(n, k, s, q)
        enum.minimize(best, enumerate_all=True)
        maximizers = sorted(
            (
                FamilyTuple(tuple(Family(n, k, tuple(f)) for f in sol))
                for sol in enum.solutions
            ),
            key=_tuple_key,
        )
        search.nodes += enum.nodes
    return ExhaustiveResult(n, k, s, q, cells - best, maximizers, search.nodes)


# ---------------------------------------------------------------------------
# theorem verification and the open question


@dataclass
class MainTheoremReport:
    n: int
    k: int
    s: int
    max_sum: int
    star_value: int
    maximizers_checked: int
    all_stars: bool
    space: str
    caveat: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.max_sum == self.star_value and self.all_stars

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "s": self.s,
            "max_sum": self.max_sum,
            "star_value": self.star_value,
            "maximizers_checked": self.maximizers_checked,
            "all_stars": self.all_stars,
            "space": self.space,
            "caveat": self.caveat,
            "holds": self.holds,
        }


def is_star_tuple(t: FamilyTuple) -> bool:
    sigs = {star_signature(f) for f in t.families}
    return len(sigs) == 1 and None not in sigs


def verify_main_theorem(
    n: int, k: int, s: int, unreduced_cell_limit: int = 64, threads: int = 1
) -> MainTheoremReport:
    """Exact maximum equals (s+1) C(n-1, k), attained only by s+1 copies of a star.

    Uniqueness is checked over all tuples when (s+1) C(n, k) is at most
    ``unreduced_cell_limit``; otherwise over the shifted nested maximizers,
    and the report carries a caveat.
    """
    ell = n - s * k
    if not 1 <= ell <= k:
        raise GuardError(f"need n = sk + l with 1 <= l <= k, got l={ell}")
    if s < 4 * ell:
        raise GuardError(f"need s >= 4l, got s={s}, l={ell}")
    reduced = max_sum_search(n, k, s, threads=threads)
    star_value = reduced.star_value
    if (s + 1) * binom(n, k) <= unreduced_cell_limit:
        full = exhaustive_max_sum(n, k, s, enumerate_all=True)
        if full.max_sum != reduced.max_sum:
            raise RuntimeError("reduced and unreduced maxima disagree")
        tuples = full.maximizers
        space, caveat = "unreduced", None
    else:
        tuples = reduced.certificates
        space = "shifted-nested"
        caveat = "uniqueness checked among shifted nested maximizers only"
    return MainTheoremReport(
        n,
        k,
        s,
        reduced.max_sum,
        star_value,
        len(tuples),
        bool(tuples) and all(is_star_tuple(t) for t in tuples),
        space,
        caveat,
    )


@dataclass
class Question41Report:
    n: int
    k: int
    s: int
    max_sum: int
    star_candidate: int
    example_candidate: int

    @property
    def larger_candidate(self) -> int:
        return max(self.star_candidate, self.example_candidate)

    @property
    def agrees(self) -> bool:
        return self.max_sum == self.larger_candidate

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "s": self.s,
            "max_sum": self.max_sum,
            "star_candidate": self.star_candidate,
            "example_candidate": self.example_candidate,
            "larger_candidate": self.larger_candidate,
            "agrees": self.agrees,
            "exceeds": self.max_sum > self.larger_candidate,
        }


def example_candidate(n: int, k: int, s: int) -> int:
    """1 + s C(n, k) - sum_{i <= k - l} C(k, i) C(n - k, k - i), with l = n - sk."""
    ell = n - s * k
    missing = sum(binom(k, i) * binom(n - k, k - i) for i in range(k - ell + 1))
    return 1 + s * binom(n, k) - missing


def explore_question41(n: int, k: int, s: int, threads: int = 1) -> Question41Report:
    """Record whether the exact maximum matches the larger candidate; asserts nothing."""
    ell = n - s * k
    if not 0 < ell < k:
        raise GuardError(f"need 0 < l < k, got l={ell}, k={k}")
    result = max_sum_search(n, k, s, collect=False, threads=threads)
    return Question41Report(
        n, k, s, result.max_sum, (s + 1) * binom(n - 1, k), example_candidate(n, k, s)
    )

import random
from itertools import product

import pytest

from crossunion.family import Family, FamilyTuple, covering_transversal, full_mask, k_subsets

ACCEPTANCE_LINES: list[str] = []


def brute_cross_union(families, n):
    full = full_mask(n)
    for choice in product(*[f.sets for f in families]):
        u = 0
        for a in choice:
            u |= a
        if u == full:
            return False
    return True


def random_family(rng: random.Random, n: int, k: int, max_size=None) -> Family:
    pool = k_subsets(n, k)
    size = rng.randint(1, min(len(pool), max_size or len(pool)))
    return Family(n, k, tuple(rng.sample(pool, size)))


def random_cross_union_tuple(rng: random.Random, n: int, ks, max_size=None) -> FamilyTuple:
    """Random families, then drop sets of covering transversals until none is left."""
    while True:
        fams = [set(random_family(rng, n, k, max_size).sets) for k in ks]
        while True:
            w = covering_transversal([sorted(f) for f in fams], n)
            if w is None:
                return FamilyTuple(tuple(Family(n, k, tuple(f)) for k, f in zip(ks, fams)))
            options = [i for i in range(len(fams)) if len(fams[i]) > 1]
            if not options:
                break
            i = rng.choice(options)
            fams[i].discard(w[i])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(20240601)

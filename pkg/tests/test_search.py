import json
import math
from fractions import Fraction

import pytest

from crossunion.family import Family, FamilyTuple, is_cross_union, star_signature, u_property
from crossunion.search import (
    ALL_BOUNDS,
    BoundContext,
    GuardError,
    example_candidate,
    exhaustive_max_sum,
    explore_question41,
    is_star_tuple,
    max_sum_search,
    star_tuple,
    verify_main_theorem,
)


def small_params(limit=12):
    return [
        (n, k, s)
        for n in range(2, 25)
        for k in range(1, n + 1)
        for s in range(1, n + 1)
        if s * k < n <= (s + 1) * k and math.comb(n, k) <= limit
    ]


class TestExamples:
    def test_3_1_2(self):
        res = max_sum_search(3, 1, 2)
        assert res.max_sum == 6 == 3 * math.comb(2, 1)
        assert exhaustive_max_sum(3, 1, 2).max_sum == 6

    def test_5_1_4_certificates_are_the_five_stars(self):
        res = max_sum_search(5, 1, 4)
        assert res.max_sum == 20
        assert len(res.star_certificates) == 5
        assert {star_signature(t[0]) for t in res.star_certificates} == {1, 2, 3, 4, 5}
        full = exhaustive_max_sum(5, 1, 4, enumerate_all=True)
        assert full.max_sum == 20
        assert len(full.maximizers) == 5
        assert all(is_star_tuple(t) for t in full.maximizers)

    def test_4_2_1_against_candidates(self):
        res = max_sum_search(4, 2, 1)
        assert res.max_sum == exhaustive_max_sum(4, 2, 1).max_sum == 6
        assert res.max_sum >= 2 * math.comb(3, 2)

    def test_verify_main(self):
        assert verify_main_theorem(5, 1, 4)
        rep = verify_main_theorem(6, 1, 5)
        assert rep.holds and rep.max_sum == 30 and rep.space == "unreduced"
        assert rep.maximizers_checked == 6

    def test_verify_main_rejects_small_s(self):
        with pytest.raises(GuardError):
            verify_main_theorem(3, 1, 2)

    def test_verify_main_reduced_space_caveat(self):
        rep = verify_main_theorem(9, 2, 4)
        assert rep.holds and rep.max_sum == 5 * math.comb(8, 2)
        assert rep.space == "shifted-nested" and rep.caveat

    def test_question41(self):
        rep = explore_question41(5, 2, 2)
        assert (rep.star_candidate, rep.example_candidate) == (18, 12)
        assert rep.max_sum == 18 and rep.agrees
        assert example_candidate(7, 3, 2) == 1 + 2 * 35 - (1 * 4 + 3 * 6 + 3 * 4)

    @pytest.mark.parametrize("n,k,s", [(6, 2, 3), (4, 1, 3), (3, 3, 1)])
    def test_question41_requires_l_below_k(self, n, k, s):
        with pytest.raises(GuardError):
            explore_question41(n, k, s)


class TestGuards:
    @pytest.mark.parametrize("n,k,s", [(4, 2, 2), (7, 2, 2), (9, 3, 2), (2, 0, 1)])
    def test_rejected(self, n, k, s):
        with pytest.raises(GuardError):
            max_sum_search(n, k, s)

    def test_budget_override(self):
        with pytest.raises(GuardError):
            max_sum_search(9, 3, 2)
        assert max_sum_search(8, 2, 3, max_binom=28).max_sum == 84


@pytest.mark.parametrize("n,k,s", small_params())
def test_oracle_equivalence(n, k, s):
    assert max_sum_search(n, k, s).max_sum == exhaustive_max_sum(n, k, s).max_sum


@pytest.mark.parametrize("n,k,s", [(5, 2, 2), (6, 1, 5), (7, 2, 3), (6, 2, 2), (8, 2, 3)])
def test_pruning_soundness(n, k, s):
    full = max_sum_search(n, k, s)
    for label in sorted(ALL_BOUNDS):
        res = max_sum_search(n, k, s, bounds=ALL_BOUNDS - {label})
        assert res.max_sum == full.max_sum
        assert [t.families for t in res.certificates] == [t.families for t in full.certificates]
    bare = max_sum_search(n, k, s, bounds=frozenset())
    assert bare.max_sum == full.max_sum
    assert bare.nodes_explored >= full.nodes_explored


@pytest.mark.parametrize("n,k,s", small_params() + [(7, 2, 3), (8, 2, 3), (6, 2, 2), (7, 3, 2)])
def test_result_invariants(n, k, s):
    res = max_sum_search(n, k, s)
    star = (s + 1) * math.comb(n - 1, k)
    assert res.star_value == star
    assert star <= res.max_sum <= (s + 1) * math.comb(n, k)
    assert Fraction(res.max_sum, s + 1) <= Fraction(s * math.comb(n, k), s + 1)
    assert res.certificates
    for t in res.certificates + res.star_certificates:
        assert is_cross_union(t)
        assert t.total == res.max_sum
        assert all(len(f) for f in t.families)
    if res.max_sum == star:
        assert len(res.star_certificates) == n


def test_bound_context_values():
    ctx = BoundContext.for_params(9, 2, 4)
    assert ctx.circle_bound == 4  # normalized: sum |G_i| / C(n, k) <= s
    assert ctx.rwise_bound == 28
    assert ctx.g0_lower == 5 * 28 - 4 * 36 + 28
    assert ctx.outer_cap == 4 * 36 - 28


def test_star_tuple_is_feasible():
    t = star_tuple(7, 2, 3, 4)
    assert is_cross_union(t) and is_star_tuple(t)
    assert t.total == 4 * math.comb(6, 2)


def test_unshifted_space_agrees():
    for p in [(5, 2, 2), (5, 1, 4), (4, 2, 1)]:
        assert max_sum_search(*p, shifted=False).max_sum == max_sum_search(*p).max_sum


def test_thread_parity():
    one = max_sum_search(7, 2, 3)
    two = max_sum_search(7, 2, 3, threads=2)
    assert one.max_sum == two.max_sum
    assert [t.families for t in one.certificates] == [t.families for t in two.certificates]


def test_search_result_json_round_trip():
    data = json.loads(max_sum_search(5, 1, 4).to_json())
    assert data["max_sum"] == 20 and data["star_value"] == 20
    assert len(data["star_certificates"]) == 5
    fams = [Family.from_text(txt) for txt in data["star_certificates"][0]]
    assert is_cross_union(fams)


class TestUProperty:
    def test_q_equal_n_minus_one_is_cross_union(self):
        assert exhaustive_max_sum(5, 2, 2, q=4).max_sum == exhaustive_max_sum(5, 2, 2).max_sum

    @pytest.mark.parametrize("n,k,s,q", [(5, 2, 1, 3), (5, 2, 2, 3), (4, 1, 2, 2), (5, 3, 1, 4)])
    def test_maximizers_have_property(self, n, k, s, q):
        res = exhaustive_max_sum(n, k, s, q=q, enumerate_all=True)
        assert res.maximizers
        for t in res.maximizers:
            assert u_property(t, q)
            assert t.total == res.max_sum

    def test_monotone_in_q(self):
        vals = [exhaustive_max_sum(5, 2, 2, q=q).max_sum for q in (2, 3, 4, 5)]
        assert vals == sorted(vals)
        assert vals[-1] == 3 * 10

    def test_q_below_k_rejected(self):
        with pytest.raises(GuardError):
            exhaustive_max_sum(5, 2, 2, q=1)

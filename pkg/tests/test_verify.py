import csv
import io
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossunion.combinat import binom_real
from crossunion.family import is_cross_union
from crossunion.verify import (
    CSV_COLUMNS,
    check_different_slices,
    check_eq1_identity,
    check_lemma_computation,
    eq1_grid,
    example13_sum,
    example13_tuple,
    example13_value,
    g0_lower,
    sufficient_condition,
    lemma26_grid,
    lemma27_grid,
    ln_bounds,
    records_to_csv,
    records_to_json,
)


class TestLemmaComputation:
    def _applicable(self, k, ell, s):
        recs = [r for r in check_lemma_computation(k, ell, s) if r.applicable]
        assert len(recs) == 1
        return recs[0]

    def test_case_i(self):
        rec = self._applicable(4, 2, 8)
        assert rec.name == "lemma26_i" and rec.holds
        assert rec.rhs == Fraction(2, 4) * math.comb(34, 4)

    def test_case_ii(self):
        rec = self._applicable(3, 2, 8)
        assert rec.name == "lemma26_ii" and rec.holds
        n = 26
        assert rec.rhs == binom_real(Fraction(2 * n, 3) + 1, 3)

    def test_k1_routes_to_case_ii(self):
        assert self._applicable(1, 1, 4).name == "lemma26_ii"

    def test_lhs_is_g0_lower(self):
        a, b = check_lemma_computation(4, 2, 8)
        assert a.lhs == b.lhs == g0_lower(34, 4, 8)

    @pytest.mark.parametrize("k,ell,s", [(3, 0, 8), (3, 4, 20), (3, 2, 7)])
    def test_hypotheses(self, k, ell, s):
        with pytest.raises(ValueError):
            check_lemma_computation(k, ell, s)

    def test_grid(self):
        recs = list(lemma26_grid())
        assert len(recs) == 2 * sum(21 for k in range(1, 26) for _ in range(1, k + 1))
        assert all(r.holds for r in recs if r.applicable)


class TestDifferentSlices:
    def test_l_equals_k_is_equality(self):
        for x0 in (Fraction(4), Fraction(13, 2), Fraction(9)):
            rec = check_different_slices(10, 4, 4, x0)
            assert rec.lhs == rec.rhs and rec.extra["characterization_ok"]

    def test_top_point_is_equality(self):
        rec = check_different_slices(20, 4, 2, 19)
        assert rec.lhs == rec.rhs
        assert rec.lhs == Fraction(18, 20)

    def test_20_4_2_10(self):
        rec = check_different_slices(20, 4, 2, 10)
        lower = Fraction(math.comb(10, 2), math.comb(20, 2))
        upper = Fraction(math.comb(10, 4), math.comb(20, 4))
        assert rec.lhs == lower
        assert rec.rhs == upper + Fraction(2, 20)
        assert rec.applicable == (lower <= 2 * upper)
        if rec.applicable:
            assert rec.strict

    @pytest.mark.parametrize("n,k,ell,x0", [(10, 4, 5, 5), (10, 10, 1, 9), (10, 4, 2, 3), (10, 4, 2, 10)])
    def test_rejects(self, n, k, ell, x0):
        with pytest.raises(ValueError):
            check_different_slices(n, k, ell, x0)

    def test_grid(self):
        recs = list(lemma27_grid(ns=(3, 5, 8, 13)))
        assert recs
        for r in recs:
            if r.applicable:
                assert r.holds and r.extra["characterization_ok"], r.parameters

    @settings(max_examples=200, deadline=None)
    @given(
        st.integers(3, 30).flatmap(
            lambda n: st.tuples(
                st.just(n),
                st.integers(1, n - 1).flatmap(lambda k: st.tuples(st.just(k), st.integers(1, k))),
                st.fractions(min_value=0, max_value=1, max_denominator=50),
            )
        )
    )
    def test_random_rational_points(self, args):
        n, (k, ell), t = args
        x0 = k + t * (n - 1 - k)
        rec = check_different_slices(n, k, ell, x0)
        if rec.applicable:
            assert rec.holds
            assert rec.extra["characterization_ok"]


class TestEq1:
    def test_examples(self):
        rec = check_eq1_identity(5, 1, 4)
        assert rec.lhs == rec.rhs == 4 and rec.holds
        rec = check_eq1_identity(9, 2, 4)
        assert rec.lhs == Fraction(35, 9) == 4 - Fraction(1, 9) and rec.holds
        rec = check_eq1_identity(14, 3, 4)
        assert rec.holds and rec.lhs == Fraction(5 * math.comb(13, 3), math.comb(14, 3))

    def test_rejects_bad_l(self):
        with pytest.raises(ValueError):
            check_eq1_identity(8, 2, 4)

    def test_grid(self):
        recs = list(eq1_grid())
        assert len(recs) == 100 * sum(range(1, 21))
        assert all(r.holds and r.lhs == r.rhs for r in recs)


class TestExample13:
    def test_small_instance(self):
        rec = example13_sum(2, 1, 2)
        assert rec.lhs == 12 and rec.rhs == 18
        assert not rec.holds and not rec.strict
        assert rec.extra["cross_union"] is True
        assert rec.extra["cross_union_check"] == "exhaustive"
        t = example13_tuple(2, 1, 2)
        assert t.n == 5 and t.sizes == (1, 1, 10)
        assert is_cross_union(t)

    def test_large_instance(self):
        rec = example13_sum(60, 1, 3)
        assert rec.parameters["n"] == 239
        assert rec.rhs == 4 * math.comb(238, 60)
        assert rec.lhs > rec.rhs and rec.strict
        assert rec.extra["condition"] is True
        assert rec.extra["cross_union"] is True

    @pytest.mark.parametrize("k,c,s", [(3, 1, 2), (3, 2, 2), (4, 1, 2), (4, 2, 3), (5, 3, 2), (4, 3, 3)])
    def test_cross_union_and_size_by_enumeration(self, k, c, s):
        t = example13_tuple(k, c, s)
        assert is_cross_union(t)
        assert t.total == example13_value(k, c, s)
        assert example13_sum(k, c, s).extra["cross_union_check"] == "exhaustive"

    @pytest.mark.parametrize("k,c,s", [(1, 1, 2), (3, 0, 2), (3, 1, 1)])
    def test_rejects(self, k, c, s):
        with pytest.raises(ValueError):
            example13_sum(k, c, s)


class TestLogBracket:
    @pytest.mark.parametrize("x", [1, 2, 3, 10, 60, 1000])
    def test_brackets_math_log(self, x):
        lo, hi = ln_bounds(x, 64)
        assert lo <= hi
        assert float(lo) <= math.log(x) + 1e-12
        assert float(hi) >= math.log(x) - 1e-12

    def test_bracket_tightens(self):
        widths = [ln_bounds(60, t)[1] - ln_bounds(60, t)[0] for t in (8, 16, 32)]
        assert widths[0] > widths[1] > widths[2] > 0

    def test_condition_matches_float_away_from_boundary(self):
        for k in range(3, 200, 7):
            for c in (1, 2, 3):
                for s in (1, 2, 3, 5):
                    margin = k / ((c + 2) * math.log(k)) - 1 - s
                    if abs(margin) > 1e-6:
                        assert sufficient_condition(k, c, s) == (margin > 0)


class TestEmission:
    def test_csv(self):
        recs = list(check_lemma_computation(4, 2, 8)) + [check_eq1_identity(9, 2, 4)]
        rows = list(csv.reader(io.StringIO(records_to_csv(recs))))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert len(rows) == 4
        assert rows[3][0] == "eq1" and rows[3][2] == "35/9" and rows[3][4] == "True"
        assert json.loads(rows[3][1]) == {"k": 2, "l": 1, "n": 9, "s": 4}

    def test_json(self):
        data = json.loads(records_to_json([check_eq1_identity(9, 2, 4)]))
        assert data[0]["lhs"] == "35/9" and data[0]["holds"] is True
        assert set(CSV_COLUMNS) <= set(data[0])

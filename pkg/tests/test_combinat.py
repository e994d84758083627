import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from crossunion.combinat import BinomTable, binom, binom_real, solve_binom_x


@pytest.mark.parametrize("a,b,expected", [(5, 2, 10), (7, 0, 1), (4, 6, 0)])
def test_binom_examples(a, b, expected):
    assert binom(a, b) == expected


@pytest.mark.parametrize("a,b", [(-1, 0), (3, -2)])
def test_binom_rejects_negative(a, b):
    with pytest.raises(ValueError):
        binom(a, b)


def test_table_matches_pascal_and_math():
    table = BinomTable(30)
    for a in range(31):
        assert table(a, 0) == table(a, a) == 1
        for b in range(1, a):
            assert table(a, b) == table(a - 1, b - 1) + table(a - 1, b)
            assert table(a, b) == math.comb(a, b)
    assert table(3, 5) == 0
    with pytest.raises(IndexError):
        table(31, 2)


def test_binom_real_examples():
    assert binom_real(2.5, 2) == pytest.approx(1.875, abs=0)
    assert binom_real(3, 2) == 3
    assert binom_real(7.25, 0) == 1
    assert binom_real(Fraction(5, 2), 2) == Fraction(15, 8)


@given(st.integers(0, 40), st.integers(0, 12))
def test_binom_real_exact_on_integers(a, k):
    # below k the falling factorial hits the factor zero, matching C(a, k) = 0
    assert binom_real(a, k) == binom(a, k)
    assert binom_real(Fraction(a), k) == binom(a, k)


@given(st.floats(1.0, 40.0), st.floats(0.01, 5.0), st.integers(1, 8))
def test_binom_real_increasing_beyond_k(x, dx, k):
    x = max(x, float(k))
    assert binom_real(x + dx, k) > binom_real(x, k)


def test_solve_examples():
    assert solve_binom_x(3, 2, 10) == pytest.approx(3.0, rel=1e-12)
    # C(x, 2) = 4  <=>  x^2 - x - 8 = 0
    assert solve_binom_x(4, 2, 10) == pytest.approx((1 + math.sqrt(33)) / 2, rel=1e-12)
    for k in (1, 3, 5):
        assert solve_binom_x(1, k, 12) == pytest.approx(k, rel=1e-12)


@pytest.mark.parametrize("m", [0, binom(9, 3) + 1])
def test_solve_rejects_out_of_range(m):
    with pytest.raises(ValueError):
        solve_binom_x(m, 3, 10)


@given(st.integers(1, 6), st.data())
def test_solve_round_trip_and_monotone(k, data):
    n = data.draw(st.integers(k + 1, 30))
    top = binom(n - 1, k)
    m1 = data.draw(st.integers(1, top))
    m2 = data.draw(st.integers(1, top))
    x1 = solve_binom_x(m1, k, n)
    assert k <= x1 <= n - 1
    assert abs(binom_real(x1, k) - m1) <= 1e-12 * m1
    if m1 < m2:
        assert x1 < solve_binom_x(m2, k, n)

"""Exact rational checks of the closed-form inequalities and constructions.

No floating point is used here.  Real-argument binomials are evaluated as
exact falling-factorial products, and the one logarithm involved is bracketed
by certified rational bounds.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .combinat import binom, binom_real
from .family import ENUM_MAX_N, Family, FamilyTuple, full_mask, is_cross_union, k_subsets, popcount

CSV_COLUMNS = ("name", "parameters", "lhs", "rhs", "holds", "strict")


@dataclass
class InequalityRecord:
    """A checked statement lhs >= rhs (identities are checked as lhs == rhs)."""

    name: str
    parameters: dict
    lhs: Fraction
    rhs: Fraction
    holds: bool
    strict: bool
    applicable: bool = True
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "parameters": self.parameters,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "holds": self.holds,
            "strict": self.strict,
            "applicable": self.applicable,
        }
        if self.extra:
            d["extra"] = self.extra
        return d


def _record(name, params, lhs, rhs, applicable=True, **extra) -> InequalityRecord:
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    return InequalityRecord(name, params, lhs, rhs, lhs >= rhs, lhs > rhs, applicable, extra)


def records_to_json(records: Iterable[InequalityRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], sort_keys=True, indent=2)


def records_to_csv(records: Iterable[InequalityRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [r.name, json.dumps(r.parameters, sort_keys=True), r.lhs, r.rhs, r.holds, r.strict]
        )
    return buf.getvalue()


def g0_lower(n: int, k: int, s: int) -> int:
    """(s+1) C(n-1, k) - s C(n, k) + C(ks, k)."""
    return (s + 1) * binom(n - 1, k) - s * binom(n, k) + binom(k * s, k)


def check_lemma_computation(k: int, ell: int, s: int) -> tuple[InequalityRecord, InequalityRecord]:
    """Both lower bounds on g0_lower at n = ks + l, as (case i, case ii).

    Case i (rhs (l/k) C(n, k)) applies when k >= 2l, case ii (rhs
    C((1 - 1/k) n + 1, k)) when k < 2l; the other record is still evaluated
    but flagged not applicable.
    """
    if not 1 <= ell <= k:
        raise ValueError(f"need 1 <= l <= k, got l={ell}, k={k}")
    if s < 4 * ell:
        raise ValueError(f"need s >= 4l, got s={s}, l={ell}")
    n = k * s + ell
    lhs = g0_lower(n, k, s)
    params = {"k": k, "l": ell, "s": s, "n": n}
    case_i = _record("lemma26_i", params, lhs, Fraction(ell, k) * binom(n, k), k >= 2 * ell)
    point = Fraction((k - 1) * n, k) + 1
    case_ii = _record("lemma26_ii", params, lhs, binom_real(point, k), k < 2 * ell)
    return case_i, case_ii


def check_different_slices(n: int, k: int, ell: int, x0) -> InequalityRecord:
    """C(x0,l)/C(n,l) >= C(x0,k)/C(n,k) + (k-l)/n, with its equality case.

    Not applicable unless C(x0,l)/C(n,l) <= (k/l) C(x0,k)/C(n,k).  The record's
    ``extra`` says whether equality occurred exactly when l = k or x0 = n - 1.
    """
    if not 1 <= ell <= k < n:
        raise ValueError(f"need 1 <= l <= k < n, got l={ell}, k={k}, n={n}")
    x0 = Fraction(x0)
    if not k <= x0 <= n - 1:
        raise ValueError(f"x0={x0} outside [{k}, {n - 1}]")
    upper = binom_real(x0, k) / binom(n, k)
    lower = binom_real(x0, ell) / binom(n, ell)
    applicable = lower <= Fraction(k, ell) * upper
    rhs = upper + Fraction(k - ell, n)
    expected_equality = ell == k or x0 == n - 1
    rec = _record(
        "lemma27",
        {"n": n, "k": k, "l": ell, "x0": str(x0)},
        lower,
        rhs,
        applicable,
        equality=lower == rhs,
        equality_expected=expected_equality,
    )
    rec.extra["characterization_ok"] = (lower == rhs) == expected_equality
    return rec


def check_eq1_identity(n: int, k: int, s: int) -> InequalityRecord:
    """(s+1) C(n-1, k) / C(n, k) == s - (k - l)/n for n = ks + l."""
    ell = n - k * s
    if not 1 <= ell <= k:
        raise ValueError(f"need n = ks + l with 1 <= l <= k, got n={n}, k={k}, s={s}")
    lhs = Fraction((s + 1) * binom(n - 1, k), binom(n, k))
    rhs = s - Fraction(k - ell, n)
    rec = _record("eq1", {"n": n, "k": k, "s": s, "l": ell}, lhs, rhs)
    rec.holds = lhs == rhs
    return rec


# ---------------------------------------------------------------------------
# the asymmetric construction


def ln_bounds(x: int, terms: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= ln x <= hi from the series 2 atanh((x-1)/(x+1))."""
    if x < 1:
        raise ValueError("x must be a positive integer")
    y = Fraction(x - 1, x + 1)
    y2 = y * y
    power = y
    total = Fraction(0)
    for j in range(terms):
        total += power / (2 * j + 1)
        power *= y2
    # tail: sum_{j >= terms} y^(2j+1)/(2j+1) <= y^(2 terms+1) / ((2 terms+1)(1 - y^2))
    tail = power / ((2 * terms + 1) * (1 - y2))
    return 2 * total, 2 * (total + tail)


def sufficient_condition(k: int, c: int, s: int, max_terms: int = 4096) -> bool:
    """Decide s < k / ((c+2) ln k) - 1 exactly, by refining rational bounds on ln k."""
    if k < 2:
        return False
    factor = (s + 1) * (c + 2)
    terms = 8
    while terms <= max_terms:
        lo, hi = ln_bounds(k, terms)
        if factor * hi < k:
            return True
        if factor * lo >= k:
            return False
        terms *= 2
    raise RuntimeError("could not separate the bound from k")


def example13_tuple(k: int, c: int, s: int) -> FamilyTuple:
    """({[k]}, {A : |A & [k]| >= c+1}, C([n],k), ..., C([n],k)) with n = sk + k - c."""
    n = s * k + (k - c)
    first = full_mask(k)
    everything = k_subsets(n, k)
    middle = tuple(a for a in everything if popcount(a & first) >= c + 1)
    rest = Family(n, k, tuple(everything))
    return FamilyTuple((Family(n, k, (first,)), Family(n, k, middle)) + (rest,) * (s - 1))


def example13_value(k: int, c: int, s: int) -> int:
    """1 + s C(n, k) - sum_{i <= c} C(k, i) C(n - k, k - i)."""
    n = s * k + (k - c)
    return 1 + s * binom(n, k) - sum(binom(k, i) * binom(n - k, k - i) for i in range(c + 1))


def example13_sum(k: int, c: int, s: int, enum_limit: int = 5000) -> InequalityRecord:
    """Sum of the construction versus (s+1) C(n-1, k).

    ``holds`` means the construction at least ties the star and ``strict``
    that it beats it.  ``extra`` carries the certified truth value of the
    sufficient condition s < k/((c+2) ln k) - 1 (meaningful for k >= 3) and
    how the cross-union property was established.
    """
    ell = k - c
    if s < 2 or c < 1 or ell < 1:
        raise ValueError(f"need s >= 2, c >= 1, k - c >= 1; got k={k}, c={c}, s={s}")
    n = s * k + ell
    value = example13_value(k, c, s)
    star = (s + 1) * binom(n - 1, k)
    cells = (s + 1) * binom(n, k)
    if n <= ENUM_MAX_N and cells <= enum_limit:
        t = example13_tuple(k, c, s)
        cross_union: Optional[bool] = is_cross_union(t)
        how = "exhaustive"
        if t.total != value:
            raise AssertionError("construction size disagrees with the closed form")
    else:
        # |F_0 u F_1| <= 2k - c - 1 = k + l - 1, and s - 1 further k-sets add at most (s-1)k
        cross_union = (k + ell - 1) + (s - 1) * k <= n - 1
        how = "structural"
    return _record(
        "example13",
        {"k": k, "c": c, "s": s, "l": ell, "n": n},
        value,
        star,
        condition=sufficient_condition(k, c, s) if k >= 3 else None,
        cross_union=cross_union,
        cross_union_check=how,
    )


# ---------------------------------------------------------------------------
# grids


def lemma26_grid(k_max: int = 25, s_span: int = 20) -> Iterator[InequalityRecord]:
    for k in range(1, k_max + 1):
        for ell in range(1, k + 1):
            for s in range(4 * ell, 4 * ell + s_span + 1):
                yield from check_lemma_computation(k, ell, s)


LEMMA27_NS = (3, 4, 5, 6, 8, 10, 13, 17, 24, 32, 45, 60)
LEMMA27_STEPS = 8


def lemma27_grid(ns: Iterable[int] = LEMMA27_NS, steps: int = LEMMA27_STEPS) -> Iterator[InequalityRecord]:
    """x0 = k + j (n - 1 - k) / steps, j = 0..steps, for all 1 <= l <= k < n."""
    for n in ns:
        for k in range(1, n):
            for ell in range(1, k + 1):
                points = sorted({k + Fraction(j * (n - 1 - k), steps) for j in range(steps + 1)})
                for x0 in points:
                    yield check_different_slices(n, k, ell, x0)


def eq1_grid(k_max: int = 20, s_max: int = 100) -> Iterator[InequalityRecord]:
    for k in range(1, k_max + 1):
        for s in range(1, s_max + 1):
            for ell in range(1, k + 1):
                yield check_eq1_identity(k * s + ell, k, s)

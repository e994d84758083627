"""Exact tools for cross-union set families: shifting, shadows, permutation
averaging, certified maximum search and exact inequality checks."""

__version__ = "0.1.0"

from .combinat import BinomTable, binom, binom_real, solve_binom_x
from .family import (
    Family,
    FamilyTuple,
    complement_dual,
    is_cross_union,
    is_r_wise_union,
    star_signature,
    u_property,
)

__all__ = [
    "BinomTable",
    "Family",
    "FamilyTuple",
    "binom",
    "binom_real",
    "complement_dual",
    "is_cross_union",
    "is_r_wise_union",
    "solve_binom_x",
    "star_signature",
    "u_property",
]

from .numbers import GaussRat, Rat, to_rat, rat_str, I
from .poly import PolyRing, MPoly, poly_is_zero
from .linalg import rank, nullspace, member, rref, echelon, independent_subset

__all__ = [
    "GaussRat", "Rat", "to_rat", "rat_str", "I",
    "PolyRing", "MPoly", "poly_is_zero",
    "rank", "nullspace", "member", "rref", "echelon", "independent_subset",
]

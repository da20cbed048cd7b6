"""Exact arithmetic substrate: rationals, sparse polynomials, truncated series."""

from .linalg import SingularError, solve_lower_triangular
from .poly import Poly, PolyRing, RingMismatchError, var_sort_key
from .rational import Rat, as_rat, rat_str
from .series import (
    SeriesOrderError,
    TruncSeries,
    binomial,
    laurent_residue,
    series_exp,
    series_pow,
)

__all__ = [
    "Poly",
    "PolyRing",
    "Rat",
    "RingMismatchError",
    "SeriesOrderError",
    "SingularError",
    "TruncSeries",
    "as_rat",
    "binomial",
    "laurent_residue",
    "rat_str",
    "series_exp",
    "series_pow",
    "solve_lower_triangular",
    "var_sort_key",
]

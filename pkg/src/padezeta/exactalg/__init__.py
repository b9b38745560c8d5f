"""Exact arithmetic: rationals, polynomials, rational functions, partial fractions."""
from .cyclotomic import Cyclotomic
from .linalg import EchelonBasis, det_int, det_poly, det_rational, rank_rational
from .partfrac import (
    BaseExpansions,
    PartialFractionForm,
    base_ratfuncs,
    pf_base_expansions,
    pf_multiply,
    pf_power,
)
from .poly import LaurentPoly, Poly, poly_gcd
from .ratfunc import RatFunc
from .rational import BigRat, as_rat, is_integral, lcm_upto, pochhammer, rat_from_json, rat_to_json
from .series import Series, series_at

__all__ = [
    "BigRat", "as_rat", "is_integral", "lcm_upto", "pochhammer", "rat_from_json", "rat_to_json",
    "Poly", "LaurentPoly", "poly_gcd", "RatFunc", "Series", "series_at",
    "PartialFractionForm", "BaseExpansions", "pf_multiply", "pf_power", "pf_base_expansions",
    "base_ratfuncs", "Cyclotomic", "EchelonBasis", "det_int", "det_rational", "det_poly", "rank_rational",
]

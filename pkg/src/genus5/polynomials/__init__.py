"""Univariate and multivariate polynomial arithmetic over GF(3^k)."""
from .univariate import (
    UniPoly,
    count_roots,
    factor,
    pgcd,
    resultant,
    resultant_poly,
    roots,
    uni_count_roots,
    uni_factor,
    uni_gcd,
)
from .forms import (
    SEXTIC_MONOMIALS,
    MPoly,
    ProjPoint,
    blowup_strict_transform,
    collinear,
    form_divides,
    form_divmod,
    line_through,
    monomials,
    parse_point,
    parse_poly,
    sextic_from_vector,
    taylor_at,
)

__all__ = [
    "MPoly", "ProjPoint", "SEXTIC_MONOMIALS", "UniPoly",
    "blowup_strict_transform", "collinear", "count_roots", "factor", "form_divides",
    "form_divmod", "line_through", "monomials", "parse_point", "parse_poly", "pgcd",
    "resultant", "resultant_poly", "roots", "sextic_from_vector", "taylor_at",
    "uni_count_roots", "uni_factor", "uni_gcd",
]

"""Non-special genus-5 curves over GF(3) through their plane sextic models."""

__version__ = "0.1.0"

from .field_tower import GF, FieldTower, get_field, make_tower  # noqa: E402
from .point_counting import (CountVector, WeilPoly, count_plane_curve, count_smooth_model,  # noqa: E402
                             is_geometrically_irreducible, weil_polynomial)
from .polynomials import MPoly, ProjPoint, parse_point, parse_poly  # noqa: E402
from .singularity import SingularConfig, non_special_check, singular_locus  # noqa: E402

__all__ = [
    "GF", "FieldTower", "get_field", "make_tower", "CountVector", "WeilPoly", "count_plane_curve",
    "count_smooth_model", "is_geometrically_irreducible", "weil_polynomial", "MPoly", "ProjPoint",
    "parse_point", "parse_poly", "SingularConfig", "non_special_check", "singular_locus",
]

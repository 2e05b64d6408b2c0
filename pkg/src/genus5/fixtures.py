"""Shipped reference data: example sextics, listed orbit representatives and their counts."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .orbit_classification import config_from_spec
from .point_counting import expand_factored
from .polynomials.forms import MPoly, parse_poly
from .singularity import SingularConfig, singular_locus


def _load(name):
    return json.loads(resources.files("genus5").joinpath("data", name).read_text())


@lru_cache(maxsize=1)
def paper_tables():
    return _load("paper_tables.json")


@lru_cache(maxsize=1)
def fixture_data():
    return _load("fixtures.json")


def listed_representatives(tag: str):
    entry = paper_tables()["patterns"][tag]
    return [config_from_spec(r) for r in entry["representatives"]]


def listed_orbit_count(tag: str) -> int:
    return paper_tables()["patterns"][tag]["orbits"]


def case_ii_constraints(tag: str):
    """(slot indices (b1, b2, b3), allowed tuples) for a case II pattern."""
    c = paper_tables()["case_ii_constraints"][tag]
    slots = (c["slots"]["b1"], c["slots"]["b2"], c["slots"]["b3"])
    return slots, [tuple(t) for t in c["tuples"]]


def reciprocal_sextic(affine: str) -> MPoly:
    """Sextic form of f(1/u, 1/v) * u^a v^b, homogenized.

    ``affine`` is a polynomial in x, y over GF(3); a and b are its degrees in
    x and y.  The result uses the variables (x, y, z) for (u, v, w).
    """
    f = parse_poly(affine, names=("x", "y"))
    a = max(m[0] for m in f.terms)
    b = max(m[1] for m in f.terms)
    moved = {(a - i, b - j): c for (i, j), c in f.terms.items()}
    d = max(i + j for i, j in moved)
    terms = {(i, j, d - i - j): c for (i, j), c in moved.items()}
    return MPoly(f.field, 3, terms)


@dataclass
class ReferenceCurve:
    name: str
    pattern: str | None
    form: MPoly
    config: SingularConfig
    N1: int
    weil_factors: list

    @property
    def weil_coeffs(self):
        return expand_factored([(tuple(f), k) for f, k in self.weil_factors])


def _config_from_locus(F: MPoly, label: str) -> SingularConfig:
    pts = tuple((e.point, 2) for e in singular_locus(F))
    return SingularConfig("I", pts, (), label)


def reference_curves():
    out = []
    for c in fixture_data()["curves"]:
        if c["sextic"]:
            F = parse_poly(c["sextic"])
        else:
            F = reciprocal_sextic(c["affine"])
        if c["config"]:
            cfg = config_from_spec(dict(c["config"], label=c["name"]))
        else:
            cfg = _config_from_locus(F, c["name"])
        out.append(ReferenceCurve(c["name"], c["pattern"], F, cfg, c["N1"], c["weil_factors"]))
    return out


def theorem_weil_classes():
    return [expand_factored([(tuple(f), k) for f, k in cls]) for cls in fixture_data()["theorem_weil_classes"]]

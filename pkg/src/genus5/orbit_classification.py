"""Singular-point configurations up to PGL3(GF(3)).

A configuration is a Frobenius-stable set of five double points (case I)
or one rational triple point with two double points (case II).  Patterns
are tagged by their Frobenius orbit sizes, e.g. ``"1,2,2"``; case II tags
carry a ``II:`` prefix.  The (1,1,1,2) pattern is further split by whether
its three rational points are collinear (``-dep``) or not (``-indep``).
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import prod

from .field_tower import get_field
from .polynomials.forms import ProjPoint, apply_matrix, collinear, parse_point
from .singularity import SingularConfig

log = logging.getLogger(__name__)

PGL3_ORDER = 5616
TABLE_VERSION = 1

CASE_I_PATTERNS = ("1,1,1,1,1", "1,1,1,2", "1,2,2", "1,1,3", "2,3", "1,4", "5")
CASE_II_PATTERNS = ("II:1,1", "II:2")
SUBCASES = {"1,1,1,2-indep": ("1,1,1,2", "indep"), "1,1,1,2-dep": ("1,1,1,2", "dep")}
ALL_TAGS = ("1,1,1,1,1", "1,1,1,2-indep", "1,1,1,2-dep", "1,2,2", "1,1,3", "2,3", "1,4", "5",
            "II:1,1", "II:2")


def parse_tag(tag: str):
    """(case, orbit sizes of the double points, sub-case or None) for a pattern tag."""
    t = tag.strip().replace(" ", "").replace("(", "").replace(")", "")
    sub = None
    if t in SUBCASES:
        t, sub = SUBCASES[t]
    case = "I"
    if t.upper().startswith("II:"):
        case, t = "II", t[3:]
    try:
        sizes = tuple(int(x) for x in t.split(","))
    except ValueError:
        raise ValueError(f"bad pattern tag {tag!r}") from None
    want = 5 if case == "I" else 2
    if sum(sizes) != want or any(s < 1 for s in sizes):
        raise ValueError(f"pattern {tag!r} does not describe {want} points")
    return case, tuple(sorted(sizes)), sub


# --- the group ---------------------------------------------------------------

@dataclass(frozen=True, order=True)
class GroupElement:
    """Invertible 3x3 matrix over GF(3) (residues), first nonzero entry 1."""

    matrix: tuple

    def __call__(self, P: ProjPoint) -> ProjPoint:
        return apply_matrix(self.matrix, P)

    def act(self, key):
        return _sorted_key((self(P), m) for P, m in key)


def _det3_int(M):
    (a, b, c), (d, e, f), (g, h, i) = M
    return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % 3


@lru_cache(maxsize=1)
def pgl3():
    out = []
    for flat in product(range(3), repeat=9):
        first = next((x for x in flat if x), 0)
        if first != 1:
            continue
        M = (flat[0:3], flat[3:6], flat[6:9])
        if _det3_int(M):
            out.append(GroupElement(M))
    if len(out) != PGL3_ORDER:
        raise AssertionError(f"|PGL3(F3)| = {len(out)}, expected {PGL3_ORDER}")
    return tuple(out)


# --- points ------------------------------------------------------------------

@lru_cache(maxsize=None)
def orbit_representatives(k: int):
    """One point (the least) from every Frobenius orbit of exact degree k."""
    F = get_field(k)
    q = F.q
    seen = set()
    reps = []
    vals = range(q)
    candidates = [(1, a, b) for a in vals for b in vals] + [(0, 1, b) for b in vals] + [(0, 0, 1)]
    for c in candidates:
        P = ProjPoint(k, c)
        if P in seen or P.degree != k:
            continue
        orb = P.orbit()
        seen.update(orb)
        reps.append(min(orb))
    reps.sort()
    return tuple(reps)


def _sorted_key(pairs):
    return tuple(sorted(pairs, key=lambda pm: (pm[0].field_degree, pm[0].coords, pm[1])))


def config_key(config: SingularConfig):
    return _sorted_key(config.points)


def general_position(case: str, points) -> bool:
    if case == "I":
        return not any(collinear(c) for c in combinations(points, 4))
    return not collinear(points)


def _rational_triple_collinear(key) -> bool | None:
    rational = [P for P, m in key if P.field_degree == 1 and m == 2]
    if len(rational) != 3:
        return None
    return collinear(rational)


def subcase_of(key):
    c = _rational_triple_collinear(key)
    if c is None:
        return None
    return "dep" if c else "indep"


# --- enumeration --------------------------------------------------------------

def _orbit_choices(sizes):
    """All multisets of distinct Frobenius orbits with the given sizes."""
    by_size = {}
    for s in sizes:
        by_size[s] = by_size.get(s, 0) + 1
    pools = []
    for s, count in sorted(by_size.items()):
        pools.append(list(combinations(orbit_representatives(s), count)))
    for choice in product(*pools):
        reps = [P for group in choice for P in group]
        yield reps


def enumerate_configs(tag: str):
    """All Frobenius-stable configurations of the pattern, in general position, as keys."""
    case, sizes, sub = parse_tag(tag)
    out = []
    if case == "I":
        for reps in _orbit_choices(sizes):
            pts = [Q for P in reps for Q in P.orbit()]
            if general_position("I", pts):
                key = _sorted_key((Q, 2) for Q in pts)
                if sub is None or subcase_of(key) == sub:
                    out.append(key)
    else:
        for T in orbit_representatives(1):
            for reps in _orbit_choices(sizes):
                if T in reps:
                    continue
                pts = [Q for P in reps for Q in P.orbit()]
                if general_position("II", [T] + pts):
                    out.append(_sorted_key([(T, 3)] + [(Q, 2) for Q in pts]))
    return out


def key_to_config(key, tag: str, label: str = "") -> SingularConfig:
    case, sizes, _ = parse_tag(tag)
    pattern = sizes if case == "I" else (1,) + sizes
    return SingularConfig(case, tuple(key), pattern, label)


# --- orbits ------------------------------------------------------------------

@dataclass
class Orbit:
    representative: tuple  # canonical key: lexicographically least configuration
    size: int
    stabilizer: int
    subcase: str | None = None
    paper_index: int | None = None

    def config(self, tag: str, label: str = "") -> SingularConfig:
        return key_to_config(self.representative, tag, label)


@dataclass
class OrbitTable:
    pattern: str
    configs_total: int
    orbits: list = field(default_factory=list)

    def __post_init__(self):
        if sum(o.size for o in self.orbits) != self.configs_total:
            raise AssertionError("orbit sizes do not add up to the number of configurations")
        for o in self.orbits:
            if PGL3_ORDER % o.size or o.size * o.stabilizer != PGL3_ORDER:
                raise AssertionError("orbit-stabilizer check failed")

    def __len__(self):
        return len(self.orbits)

    def config(self, index: int) -> SingularConfig:
        """1-based orbit index."""
        if not 1 <= index <= len(self.orbits):
            raise IndexError(f"pattern {self.pattern} has {len(self.orbits)} orbits")
        return self.orbits[index - 1].config(self.pattern, f"{self.pattern}#{index}")

    def to_json(self):
        return {
            "version": TABLE_VERSION,
            "pattern": self.pattern,
            "configs_total": self.configs_total,
            "orbits": [{
                "index": i,
                "size": o.size,
                "stabilizer": o.stabilizer,
                "subcase": o.subcase,
                "paper_index": o.paper_index,
                "points": [[str(P), m] for P, m in o.representative],
            } for i, o in enumerate(self.orbits, start=1)],
        }

    @classmethod
    def from_json(cls, data):
        if data.get("version") != TABLE_VERSION:
            raise ValueError("unsupported orbit table version")
        orbits = []
        for o in data["orbits"]:
            key = _sorted_key((parse_point(p), m) for p, m in o["points"])
            orbits.append(Orbit(key, o["size"], o["stabilizer"], o.get("subcase"), o.get("paper_index")))
        return cls(data["pattern"], data["configs_total"], orbits)


def orbit_of(key, group=None):
    """(set of images, stabilizer order) of a configuration key."""
    group = group or pgl3()
    images = set()
    stab = 0
    for g in group:
        img = g.act(key)
        images.add(img)
        if img == key:
            stab += 1
    return images, stab


def orbit_decompose(configs, tag: str, group=None) -> OrbitTable:
    group = group or pgl3()
    remaining = set(configs)
    total = len(remaining)
    orbits = []
    while remaining:
        key = min(remaining)
        images, stab = orbit_of(key, group)
        if not images <= remaining:
            raise AssertionError("configuration set is not closed under PGL3(F3)")
        remaining -= images
        rep = min(images)
        orbits.append(Orbit(rep, len(images), stab, subcase_of(rep)))
        log.debug("%s: orbit of size %d", tag, len(images))
    orbits.sort(key=lambda o: o.representative)
    return OrbitTable(tag, total, orbits)


def classify(tag: str) -> OrbitTable:
    return orbit_decompose(enumerate_configs(tag), tag)


def locate_paper_representative(rep, table: OrbitTable) -> int:
    """1-based index of the orbit containing ``rep`` (a SingularConfig or key)."""
    key = config_key(rep) if isinstance(rep, SingularConfig) else _sorted_key(rep)
    for g in pgl3():
        img = g.act(key)
        for i, o in enumerate(table.orbits, start=1):
            if img == o.representative:
                return i
    raise LookupError("representative not found in any orbit; check the primitive elements")


def locate_all(table: OrbitTable, reps):
    """Orbit index (1-based) of every listed representative, None when not found."""
    out = []
    for r in reps:
        try:
            out.append(locate_paper_representative(r, table))
        except LookupError:
            out.append(None)
    return out


def order_by_paper(table: OrbitTable, located) -> OrbitTable:
    """Reorder orbits so that the listed representatives come first, in listed order.

    ``located`` is the output of :func:`locate_all`; repeated or missing
    entries are skipped, and orbits no listed representative reaches go last.
    """
    order = []
    for i in located:
        if i is not None and i not in order:
            order.append(i)
    n_listed = len(order)
    order += [i for i in range(1, len(table.orbits) + 1) if i not in order]
    orbits = []
    for pos, i in enumerate(order, start=1):
        o = table.orbits[i - 1]
        o.paper_index = pos if pos <= n_listed else None
        orbits.append(o)
    return OrbitTable(table.pattern, table.configs_total, orbits)


# --- listed representatives -------------------------------------------------

def config_from_spec(spec: dict) -> SingularConfig:
    """Build a configuration from {"case", "orbits": [[point, multiplicity], ...]}.

    Each listed point stands for its whole Frobenius orbit.
    """
    reps = [parse_point(p) for p, _ in spec["orbits"]]
    mults = [m for _, m in spec["orbits"]]
    return SingularConfig.from_orbits(spec.get("case", "I"), reps, mults, spec.get("label", ""))


def save_tables(tables, path):
    with open(path, "w") as fh:
        json.dump({"version": TABLE_VERSION, "tables": [t.to_json() for t in tables]}, fh, indent=1)


def load_tables(path):
    with open(path) as fh:
        data = json.load(fh)
    return {t["pattern"]: OrbitTable.from_json(t) for t in data["tables"]}


def expected_configs_total(tag: str) -> int | None:
    """Pre-filter count of Frobenius-stable point sets (before general position), for logging."""
    case, sizes, _ = parse_tag(tag)
    counts = {}
    for s in sizes:
        counts[s] = counts.get(s, 0) + 1
    from math import comb
    n = prod(comb(len(orbit_representatives(s)), c) for s, c in counts.items())
    return n * (13 if case == "II" else 1)

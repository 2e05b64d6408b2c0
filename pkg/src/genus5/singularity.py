"""Singular points of plane sextics: multiplicities, tangent cones, blow-ups.

A sextic model is *non-special* when its singularities are five double
points, or one triple point and two double points, each resolved by a
single blow-up.  Then the geometric genus is 10 - 5 = 5 and rational
points of the smooth model are counted from the plane curve plus a
tangent-cone correction at each rational singular point.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from math import gcd

from .field_tower import ResidueField, embed_value, get_field
from .polynomials import univariate as U
from .polynomials.forms import (
    MPoly,
    ProjPoint,
    blowup_strict_transform,
    collinear,
    taylor_at,
)

log = logging.getLogger(__name__)

MAX_TOWER = 10


class PositiveDimensionalSingularLocus(ArithmeticError):
    """Every eliminant vanished identically, even after random coordinate changes."""


# --- configurations ----------------------------------------------------------

@dataclass(frozen=True)
class SingularConfig:
    """Prescribed singular points with multiplicities (all Frobenius conjugates listed)."""

    case: str
    points: tuple  # of (ProjPoint, multiplicity)
    pattern: tuple = ()
    label: str = ""

    @classmethod
    def from_orbits(cls, case, orbit_reps, multiplicities=None, label=""):
        """Expand Frobenius orbits of representative points (multiplicity 2 unless given)."""
        pts = []
        pattern = []
        mults = multiplicities or [2] * len(orbit_reps)
        for P, m in zip(orbit_reps, mults):
            orb = P.minimal().orbit()
            pattern.append(len(orb))
            pts.extend((Q, m) for Q in orb)
        return cls(case, tuple(pts), tuple(pattern), label)

    @property
    def point_list(self):
        return [P for P, _ in self.points]

    @property
    def degrees(self):
        return [P.field_degree for P, _ in self.points]

    @property
    def compositum_degree(self):
        d = 1
        for k in self.degrees:
            d = d * k // gcd(d, k)
        return d

    def orbits(self):
        """Frobenius orbits as lists of (point, multiplicity)."""
        seen, out = set(), []
        for P, m in self.points:
            if P in seen:
                continue
            orb = P.orbit()
            seen.update(orb)
            out.append([(Q, m) for Q in orb])
        return out

    def is_frobenius_stable(self) -> bool:
        S = {(P, m) for P, m in self.points}
        return all((P.frobenius(), m) in S for P, m in self.points)

    def in_general_position(self) -> bool:
        pts = self.point_list
        if self.case == "I":
            from itertools import combinations
            return not any(collinear(c) for c in combinations(pts, 4))
        return not collinear(pts)

    def validate(self):
        ms = sorted(m for _, m in self.points)
        want = [2] * 5 if self.case == "I" else [2, 2, 3]
        if ms != want:
            raise ValueError(f"case {self.case} needs multiplicities {want}, got {ms}")
        if self.case == "II":
            triple = next(P for P, m in self.points if m == 3)
            if triple.field_degree != 1:
                raise ValueError("the triple point must be GF(3)-rational")
        if len({P for P, _ in self.points}) != len(self.points):
            raise ValueError("repeated point")
        if not self.is_frobenius_stable():
            raise ValueError("point set is not Frobenius-stable")
        return self

    def to_json(self):
        return {"case": self.case, "pattern": list(self.pattern), "label": self.label,
                "points": [[str(P), m] for P, m in self.points]}

    def __str__(self):
        return ", ".join(f"{P}^{m}" if m != 2 else str(P) for P, m in self.points)


# --- local invariants -------------------------------------------------------

def multiplicity(F: MPoly, P: ProjPoint) -> int:
    """Least total degree in the Taylor expansion of F at P (0: P is off the curve)."""
    T = taylor_at(F, P)
    if T.is_zero():
        raise ValueError("the zero form has no multiplicity")
    return T.lowest_degree()


def tangent_cone(F: MPoly, P: ProjPoint) -> MPoly:
    T = taylor_at(F, P)
    return T.homogeneous_part(T.lowest_degree())


def _binary_coeffs(h: MPoly, m: int):
    """Coefficients of h as [coef of X^m, X^(m-1)Y, ..., Y^m]."""
    return [h.coeff((m - i, i)) for i in range(m + 1)]


def discriminant(h: MPoly):
    """b^2 - ac for h = aX^2 + bXY + cY^2 (4 = 1 in characteristic 3)."""
    a, b, c = _binary_coeffs(h, 2)
    F = h.field
    return F.sub(F.mul(b, b), F.mul(a, c))


def _univariate_in(h: MPoly, var: int, at_one: int):
    """h with variable ``at_one`` set to 1, as a coefficient list in variable ``var``."""
    F = h.field
    out = {}
    for mono, c in h.terms.items():
        e = mono[var]
        out[e] = F.add(out.get(e, 0), c)
    n = max(out, default=-1)
    return U.trim([out.get(i, 0) for i in range(n + 1)])


def local_resolves(g: MPoly, m: int | None = None) -> bool:
    """One blow-up at the origin resolves the germ g (smooth strict transform over the origin)."""
    if m is None:
        m = g.lowest_degree()
    F = g.field
    G1 = blowup_strict_transform(g, m, chart=1)  # variables (X, Z)
    # points over the origin in chart 1 are (0, z0) with G1(0, z0) = 0
    g0 = U.trim([G1.coeff((0, j)) for j in range(m + 1)])
    gz = U.pderiv(F, g0)
    gx = U.trim([G1.coeff((1, j)) for j in range(m + 2)])
    if U.deg(U.pgcd(F, U.pgcd(F, g0, gz), gx)) > 0:
        return False
    # the direction X = 0 is the origin of chart 2
    if not g.homogeneous_part(m).coeff((0, m)):
        G2 = blowup_strict_transform(g, m, chart=2)  # variables (Z, Y)
        if not G2.coeff((0, 0)) and not G2.coeff((1, 0)) and not G2.coeff((0, 1)):
            return False
    return True


def one_blowup_resolves(F: MPoly, P: ProjPoint) -> bool:
    T = taylor_at(F, P)
    m = T.lowest_degree()
    if m < 2:
        raise ValueError("P is not a singular point")
    return local_resolves(T, m)


def tangent_adjustment(h: MPoly, e: int) -> int:
    """#V(h)(GF(3^e)) - 1 for the tangent cone h, a binary form of degree 2 or 3."""
    if h.is_zero():
        raise ValueError("zero tangent cone")
    m = h.degree()
    k = h.field.degree
    if e % k:
        d = h.coefficient_degree()
        if e % d:
            raise ValueError("tangent cone is not defined over GF(3^e)")
        h = h.restrict(d)
    if h.field.degree != e:
        h = h.embed(e)
    E = h.field
    if m == 2:
        D = discriminant(h)
        if not D:
            return 0
        return 1 if E.is_square(D) else -1
    # general degree: rational roots on P^1
    f = _univariate_in(h, 0, 1)  # h(X, 1)
    n = U.count_roots(E, f) if U.deg(f) > 0 else 0
    if not h.coeff((m, 0)):
        n += 1  # the point (1:0)
    return n - 1


@dataclass
class SingularPointReport:
    point: ProjPoint
    multiplicity: int
    tangent_cone: MPoly
    discriminant: int | None
    resolved_in_one_blowup: bool
    adjustments: dict = field(default_factory=dict)

    def to_json(self):
        F = self.tangent_cone.field
        return {
            "point": str(self.point),
            "degree": self.point.field_degree,
            "multiplicity": self.multiplicity,
            "tangent_cone": str(self.tangent_cone),
            "discriminant": None if self.discriminant is None else F.format(self.discriminant),
            "resolved_in_one_blowup": self.resolved_in_one_blowup,
            "adjustments": {str(k): v for k, v in self.adjustments.items()},
        }


def point_report(F: MPoly, P: ProjPoint, extensions=(2, 4, 6, 8, 10)) -> SingularPointReport:
    T = taylor_at(F, P)
    m = T.lowest_degree()
    h = T.homogeneous_part(m)
    adj = {e: tangent_adjustment(h, e) for e in extensions if e % P.field_degree == 0} if m >= 2 else {}
    return SingularPointReport(
        point=P, multiplicity=m, tangent_cone=h,
        discriminant=discriminant(h) if m == 2 else None,
        resolved_in_one_blowup=local_resolves(T, m) if m >= 2 else True,
        adjustments=adj,
    )


# --- singular locus ---------------------------------------------------------

def _dehomogenize(F: MPoly, fixed: int):
    """Coefficient table {(a, b): c} of F with variable ``fixed`` set to 1."""
    others = [i for i in range(3) if i != fixed]
    out = {}
    for m, c in F.terms.items():
        key = (m[others[0]], m[others[1]])
        out[key] = F.field.add(out.get(key, 0), c)
    return {k: v for k, v in out.items() if v}


def _as_poly_in_y(table):
    """{(a, b): c} -> list over b of coefficient lists in a."""
    if not table:
        return []
    by = max(b for _, b in table)
    ax = max(a for a, _ in table)
    out = [[0] * (ax + 1) for _ in range(by + 1)]
    for (a, b), c in table.items():
        out[b][a] = c
    return U.trim([U.trim(r) for r in out])


def _trim_outer(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _specialize(E, table, x0, src=1):
    """Univariate polynomial in y: table evaluated at x = x0 in the field E."""
    by = max((b for _, b in table), default=-1)
    out = [0] * (by + 1)
    pw = {}
    for (a, b), c in table.items():
        if a not in pw:
            pw[a] = E.pow(x0, a)
        v = E.mul(_lift(E, c, src), pw[a])
        out[b] = E.add(out[b], v)
    return U.trim(out)


def _lift(E, c, src):
    if isinstance(E, ResidueField):
        return E.from_int(get_field(1).to_int(c))
    return embed_value(c, src, E.degree)


def _partials(F: MPoly):
    return [F.derivative(i) for i in range(3)]


@dataclass(frozen=True)
class LocusEntry:
    point: ProjPoint | None
    degree: int


def _affine_singular_orbits(F: MPoly, rng):
    """Frobenius orbits of singular points with z != 0, as (point over its minimal field, degree)."""
    F3 = F.field
    f = _dehomogenize(F, 2)
    fx = _dehomogenize(F.derivative(0), 2)
    fy = _dehomogenize(F.derivative(1), 2)
    if not f:
        raise PositiveDimensionalSingularLocus("form vanishes identically on the chart")
    fy_poly = _as_poly_in_y(f)
    eliminants = []
    combos = [(1, 0), (0, 1), (1, 1), (1, 2)]
    for a, b in combos:
        g = {}
        for t, c in fx.items():
            if a:
                g[t] = F3.add(g.get(t, 0), F3.mul(F3.from_int(a), c))
        for t, c in fy.items():
            if b:
                g[t] = F3.add(g.get(t, 0), F3.mul(F3.from_int(b), c))
        g = {k: v for k, v in g.items() if v}
        if not g:
            continue
        gp = _as_poly_in_y(g)
        if len(fy_poly) < 2 and len(gp) < 2:
            # neither depends on y: the singular x-values are the common roots
            r = U.pgcd(F3, fy_poly[0] if fy_poly else [], gp[0])
        else:
            r = U.resultant_poly(F3, fy_poly, gp)
        if r:
            eliminants.append(r)
        if len(eliminants) >= 2:
            break
    if not eliminants:
        raise PositiveDimensionalSingularLocus("all eliminants vanish identically")
    R = eliminants[0]
    for r in eliminants[1:]:
        R = U.pgcd(F3, R, r)
    R = U.pmonic(F3, R)
    orbits = []
    if U.deg(R) <= 0:
        return orbits
    for r, _mult in U.factor(F3, R, rng):
        d = U.deg(r)
        if d <= MAX_TOWER:
            E = get_field(d)
            re = U.embed_poly(r, 1, d)
            x0 = U.roots(E, re, rng)[0]
        else:
            E = ResidueField(tuple(get_field(1).to_int(c) for c in r))
            x0 = E.gen
        polys = [_specialize(E, t, x0) for t in (f, fx, fy)]
        g = polys[0]
        for p in polys[1:]:
            g = U.pgcd(E, g, p)
        if not g and not any(polys):
            raise PositiveDimensionalSingularLocus("a whole vertical line is singular")
        if U.deg(g) <= 0:
            continue
        if d > MAX_TOWER:
            orbits.append((None, d * U.deg(g)))
            log.debug("singular point over a field of degree >= %d", d)
            continue
        for h, _ in U.factor(E, U.pmonic(E, g), rng):
            e = U.deg(h)
            L = d * e
            if L > MAX_TOWER:
                orbits.append((None, L))
                continue
            EL = get_field(L)
            y0 = U.roots(EL, U.embed_poly(h, d, L), rng)[0]
            P = ProjPoint.make((embed_value(x0, d, L), y0, 1), L).minimal()
            orbits.append((P, P.field_degree))
    return orbits


def _infinity_orbits(F: MPoly, rng):
    """Singular points on the line z = 0."""
    F3 = F.field
    out = []
    parts = [F] + _partials(F)
    # (x:1:0)
    polys = []
    for p in parts:
        t = {}
        for m, c in p.terms.items():
            if m[2] == 0:
                t[m[0]] = F3.add(t.get(m[0], 0), c)
        n = max(t, default=-1)
        polys.append(U.trim([t.get(i, 0) for i in range(n + 1)]))
    g = polys[0]
    for p in polys[1:]:
        g = U.pgcd(F3, g, p)
    if not any(polys):
        raise PositiveDimensionalSingularLocus("the line z = 0 is singular")
    if U.deg(g) > 0:
        for h, _ in U.factor(F3, U.pmonic(F3, g), rng):
            d = U.deg(h)
            if d > MAX_TOWER:
                out.append((None, d))
                continue
            E = get_field(d)
            x0 = U.roots(E, U.embed_poly(h, 1, d), rng)[0]
            out.append((ProjPoint.make((x0, 1, 0), d), d))
    # (1:0:0)
    if all(not p.coeff((p.degree(), 0, 0)) for p in parts if p):
        if all(not p.evaluate((1, 0, 0)) for p in parts):
            out.append((ProjPoint.make((1, 0, 0), 1), 1))
    return out


def _random_gl3(rng):
    F = get_field(1)
    from .sextic_model import det3_field
    while True:
        M = [[rng.randrange(3) for _ in range(3)] for _ in range(3)]
        if det3_field(F, [[F.from_int(v) for v in r] for r in M]) % 3:
            return M


def _apply_int_matrix(M, P: ProjPoint) -> ProjPoint:
    F = P.field
    coords = []
    for row in M:
        acc = 0
        for a, c in zip(row, P.coords):
            acc = F.add(acc, F.mul(F.from_int(a), c))
        coords.append(acc)
    return ProjPoint.make(coords, P.field_degree)


def singular_locus(F: MPoly, seed: int = 0, retries: int = 5):
    """All singular points of V(F) over the algebraic closure.

    Returns a sorted list of :class:`LocusEntry`; Frobenius conjugates are
    listed individually.  Points over fields of degree above 10 are
    reported once per Frobenius orbit with ``point=None``.
    """
    if F.field.degree != 1:
        raise ValueError("singular_locus expects a form over GF(3)")
    if F.is_zero():
        raise ValueError("zero form")
    rng = random.Random(seed)
    G, M = F, None
    for attempt in range(retries + 1):
        try:
            orbits = _affine_singular_orbits(G, rng) + _infinity_orbits(G, rng)
            break
        except PositiveDimensionalSingularLocus:
            if attempt == retries:
                raise
            M = _random_gl3(rng)
            F1 = get_field(1)
            G = F.linear_transform([[F1.from_int(v) for v in row] for row in M])
            log.debug("retrying singular locus after coordinate change %s", M)
    out = []
    for P, d in orbits:
        if P is None:
            out.append(LocusEntry(None, d))
            continue
        for Q in P.orbit():
            out.append(LocusEntry(_apply_int_matrix(M, Q) if M else Q, d))
    out.sort(key=lambda e: (e.degree, e.point is None, e.point.coords if e.point else ()))
    return out


def singular_points(F: MPoly, seed: int = 0):
    return [e.point for e in singular_locus(F, seed)]


# --- non-special check --------------------------------------------------------

@dataclass
class NonSpecialResult:
    ok: bool
    reason: str = ""
    reports: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def non_special_report(F: MPoly, config: SingularConfig, check_irreducible=True,
                       locus=None) -> NonSpecialResult:
    reports = []
    for P, m in config.points:
        r = point_report(F, P)
        reports.append(r)
        if r.multiplicity != m:
            return NonSpecialResult(False, f"multiplicity {r.multiplicity} at {P}, expected {m}", reports)
    try:
        loc = locus if locus is not None else singular_locus(F)
    except PositiveDimensionalSingularLocus as exc:
        return NonSpecialResult(False, f"positive-dimensional singular locus ({exc})", reports)
    if not loc:
        return NonSpecialResult(False, "no singular points; not a genus-5 non-special model", reports)
    ms = sorted(m for _, m in config.points)
    if ms not in ([2] * 5, [2, 2, 3]):
        return NonSpecialResult(False, f"multiplicities {ms} are neither five double points "
                                       "nor one triple and two double points", reports)
    found = {e.point for e in loc if e.point is not None}
    if any(e.point is None for e in loc) or found != set(config.point_list):
        extra = sorted(str(p) for p in found - set(config.point_list))
        return NonSpecialResult(False, f"singular locus differs from the configuration (extra: {extra})", reports)
    for r in reports:
        if not r.resolved_in_one_blowup:
            return NonSpecialResult(False, f"{r.point} is not resolved by one blow-up", reports)
    if check_irreducible:
        from .point_counting import is_geometrically_irreducible
        if not is_geometrically_irreducible(F):
            return NonSpecialResult(False, "not geometrically irreducible", reports)
    return NonSpecialResult(True, "", reports)


def non_special_check(F: MPoly, config: SingularConfig) -> bool:
    return non_special_report(F, config).ok


def delta_total(config: SingularConfig) -> int:
    return sum(m * (m - 1) // 2 for _, m in config.points)

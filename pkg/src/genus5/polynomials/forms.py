"""Sparse multivariate polynomials, projective points and local expansions.

:class:`MPoly` stores ``{exponent tuple: stored field value}`` with zero
coefficients dropped.  Ternary sextics, the quinary quadrics of the
P^4 model, bivariate Taylor expansions and tangent cones all use it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd

from ..field_tower import FieldError, embed_value, get_field, parse_value, restrict_value

VARS3 = ("x", "y", "z")
VARS5 = ("x0", "x1", "x2", "x3", "x4")
VARS2 = ("X", "Y")


@lru_cache(maxsize=None)
def monomials(nvars: int, d: int):
    """Exponent tuples of total degree d, lexicographically descending (x > y > z ...)."""
    if nvars == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        for rest in monomials(nvars - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


SEXTIC_MONOMIALS = monomials(3, 6)
SEXTIC_INDEX = {m: i for i, m in enumerate(SEXTIC_MONOMIALS)}


def _default_names(nvars):
    return {2: VARS2, 3: VARS3, 5: VARS5}.get(nvars) or tuple(f"x{i}" for i in range(nvars))


class MPoly:
    """Polynomial in ``nvars`` variables over GF(3^k) (``field`` is the field object)."""

    __slots__ = ("field", "nvars", "terms", "names")

    def __init__(self, field, nvars, terms=None, names=None):
        self.field = field
        self.nvars = nvars
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self.names = names or _default_names(nvars)

    # -- construction
    @classmethod
    def zero(cls, field, nvars, names=None):
        return cls(field, nvars, {}, names)

    @classmethod
    def const(cls, field, nvars, c, names=None):
        return cls(field, nvars, {(0,) * nvars: c}, names)

    @classmethod
    def var(cls, field, nvars, i, names=None):
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1}, names)

    @classmethod
    def from_int_terms(cls, terms, nvars=3, field_degree=1):
        F = get_field(field_degree)
        return cls(F, nvars, {m: F.from_int(c) for m, c in terms.items()})

    def _new(self, terms):
        return MPoly(self.field, self.nvars, terms, self.names)

    @property
    def field_degree(self):
        return self.field.degree

    # -- structure
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(m) for m in self.terms}) <= 1

    def homogeneous_part(self, d):
        return self._new({m: c for m, c in self.terms.items() if sum(m) == d})

    def lowest_degree(self):
        return min((sum(m) for m in self.terms), default=-1)

    def coeff(self, m):
        return self.terms.get(tuple(m), 0)

    def __eq__(self, other):
        return (isinstance(other, MPoly) and self.nvars == other.nvars
                and self.field.degree == other.field.degree and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, self.field.degree, frozenset(self.terms.items())))

    def _check(self, o):
        if o.nvars != self.nvars or o.field.degree != self.field.degree:
            raise FieldError("operands live in different rings; embed first")

    # -- arithmetic
    def __add__(self, o):
        self._check(o)
        F = self.field
        t = dict(self.terms)
        for m, c in o.terms.items():
            t[m] = F.add(t.get(m, 0), c)
        return self._new(t)

    def __neg__(self):
        F = self.field
        return self._new({m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c):
        F = self.field
        return self._new({m: F.mul(v, c) for m, v in self.terms.items()})

    def __mul__(self, o):
        if isinstance(o, int):
            return self.scale(self.field.from_int(o))
        self._check(o)
        F = self.field
        add, mul = F.add, F.mul
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = add(t.get(m, 0), mul(c1, c2))
        return self._new(t)

    __rmul__ = __mul__

    def __pow__(self, e):
        out = MPoly.const(self.field, self.nvars, 1, self.names)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def derivative(self, i):
        F = self.field
        t = {}
        for m, c in self.terms.items():
            if m[i] % 3:
                e = list(m)
                e[i] -= 1
                t[tuple(e)] = F.add(t.get(tuple(e), 0), F.mul(c, F.from_int(m[i])))
        return self._new(t)

    def __call__(self, *values):
        return self.evaluate(values)

    def evaluate(self, values):
        F = self.field
        add, mul, pw = F.add, F.mul, F.pow
        acc = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(values, m):
                if e:
                    v = mul(v, pw(x, e))
                    if not v:
                        break
            acc = add(acc, v)
        return acc

    def substitute(self, polys):
        """Compose: variable i -> polys[i] (all over the same field)."""
        target = polys[0]
        F = self.field
        cache = [dict() for _ in polys]

        def power(i, e):
            if e not in cache[i]:
                cache[i][e] = polys[i] ** e
            return cache[i][e]

        out = MPoly.zero(F, target.nvars, target.names)
        for m, c in self.terms.items():
            term = MPoly.const(F, target.nvars, c, target.names)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def linear_transform(self, M):
        """F(M v): each variable x_i is replaced by sum_j M[i][j] x_j (entries stored in self.field)."""
        n = self.nvars
        lin = [MPoly(self.field, n, {tuple(int(k == j) for k in range(n)): M[i][j] for j in range(n)},
                     self.names) for i in range(n)]
        return self.substitute(lin)

    def embed(self, dst):
        src = self.field.degree
        if src == dst:
            return self
        return MPoly(get_field(dst), self.nvars,
                     {m: embed_value(c, src, dst) for m, c in self.terms.items()}, self.names)

    def restrict(self, dst):
        src = self.field.degree
        if src == dst:
            return self
        return MPoly(get_field(dst), self.nvars,
                     {m: restrict_value(c, src, dst) for m, c in self.terms.items()}, self.names)

    def coefficient_degree(self):
        """Degree of the smallest subfield containing all coefficients."""
        F = self.field
        d = 1
        for c in self.terms.values():
            d = d * F.minimal_degree(c) // gcd(d, F.minimal_degree(c))
        return d

    def frobenius(self, times=1):
        F = self.field
        return self._new({m: F.frob(c, times) for m, c in self.terms.items()})

    def monic(self):
        """Scale so that the lex-leading coefficient is 1."""
        if not self.terms:
            return self
        lm = max(self.terms)
        return self.scale(self.field.inv(self.terms[lm]))

    def projectively_equal(self, other):
        return self.scalar_ratio(other) is not None

    def scalar_ratio(self, other):
        """c with other == c * self, or None."""
        self._check(other)
        if not self.terms or not other.terms:
            return 0 if not other.terms and not self.terms else None
        if set(self.terms) != set(other.terms):
            return None
        F = self.field
        m0 = next(iter(self.terms))
        c = F.div(other.terms[m0], self.terms[m0])
        for m, v in self.terms.items():
            if F.mul(v, c) != other.terms[m]:
                return None
        return c

    # -- presentation
    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        return format_poly(self)

    # sextic coefficient vector (graded lex layout)
    def to_vector(self):
        return [self.terms.get(m, 0) for m in monomials(self.nvars, self.degree())]


def sextic_from_vector(vec, field=None):
    """Ternary sextic from its 28 coefficients (GF(3) residues by default)."""
    F = field or get_field(1)
    if field is None:
        vals = [F.from_int(int(c)) for c in vec]
    else:
        vals = list(vec)
    return MPoly(F, 3, {m: c for m, c in zip(SEXTIC_MONOMIALS, vals) if c})


def sextic_to_residues(F: MPoly):
    if F.field.degree != 1:
        F = F.restrict(1)
    return [F.terms.get(m, 0) for m in SEXTIC_MONOMIALS]


# --- text format ---------------------------------------------------------------

def format_poly(p: MPoly) -> str:
    F = p.field
    parts = []
    for m in sorted(p.terms, reverse=True):
        c = p.terms[m]
        mono = []
        for name, e in zip(p.names, m):
            if e == 1:
                mono.append(name)
            elif e > 1:
                mono.append(f"{name}^{e}")
        mono = "*".join(mono)
        cs = F.format(c)
        if cs.startswith("("):
            pass
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        else:
            parts.append(f"{cs}*{mono}")
    return " + ".join(parts) if parts else "0"


_COEF_RE = re.compile(r"(?:ζ|zeta)\d+\^-?\d+|\(\s*\d+(?:\s*,\s*\d+)*\s*\)|\d+")


def _split_terms(text):
    depth, cur, out = 0, "", []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip():
            out.append(cur)
            cur = "" if ch == "+" else "-"
            continue
        cur += ch
    if cur.strip():
        out.append(cur)
    return out


def _coef_degree(token):
    m = re.match(r"(?:ζ|zeta)(\d+)\^", token)
    if m:
        return int(m.group(1))
    if token.startswith("("):
        return len(token.strip("()").split(","))
    return 1


def parse_poly(text: str, names=VARS3, field_degree: int | None = None) -> MPoly:
    """Parse ``"x^4*y^2 + 2x^3y^3z + ζ2^5*y^6"``-style text (``*`` optional)."""
    text = text.replace(" ", "").replace("·", "*")
    terms = _split_terms(text)
    var_re = re.compile("(" + "|".join(sorted(map(re.escape, names), key=len, reverse=True))
                        + r")(?:\^(\d+))?")
    parsed = []
    need = 1
    for t in terms:
        sign = 1
        if t.startswith("-"):
            sign, t = -1, t[1:]
        coef = "1"
        m = _COEF_RE.match(t)
        # an integer prefix is a coefficient; a ζ/tuple prefix always is
        if m and not (m.group(0).isdigit() and t[:1].isalpha()):
            coef = m.group(0)
            t = t[m.end():]
        t = t.lstrip("*")
        exps = [0] * len(names)
        pos = 0
        while pos < len(t):
            if t[pos] == "*":
                pos += 1
                continue
            vm = var_re.match(t, pos)
            if not vm:
                raise ValueError(f"cannot parse monomial {t!r}")
            exps[names.index(vm.group(1))] += int(vm.group(2) or 1)
            pos = vm.end()
        d = _coef_degree(coef)
        need = need * d // gcd(need, d)
        parsed.append((sign, coef, tuple(exps)))
    k = field_degree or need
    F = get_field(k)
    out = {}
    for sign, coef, exps in parsed:
        v = parse_value(coef, k)
        if sign < 0:
            v = F.neg(v)
        out[exps] = F.add(out.get(exps, 0), v)
    return MPoly(F, len(names), out, tuple(names))


# --- projective points -------------------------------------------------------

@dataclass(frozen=True, order=True)
class ProjPoint:
    """Point of P^2 over GF(3^field_degree), first nonzero coordinate equal to 1."""

    field_degree: int
    coords: tuple

    @classmethod
    def make(cls, coords, field_degree):
        F = get_field(field_degree)
        coords = tuple(coords)
        lead = next((c for c in coords if c), None)
        if lead is None:
            raise ValueError("the zero vector is not a projective point")
        if lead != 1:
            inv = F.inv(lead)
            coords = tuple(F.mul(c, inv) for c in coords)
        return cls(field_degree, coords)

    @classmethod
    def from_ints(cls, ints):
        F = get_field(1)
        return cls.make([F.from_int(i) for i in ints], 1)

    @property
    def field(self):
        return get_field(self.field_degree)

    @property
    def chart(self):
        return next(i for i, c in enumerate(self.coords) if c)

    def frobenius(self, times=1):
        F = self.field
        return ProjPoint(self.field_degree, tuple(F.frob(c, times) for c in self.coords))

    def embed(self, dst):
        return ProjPoint(dst, tuple(embed_value(c, self.field_degree, dst) for c in self.coords))

    @property
    def degree(self):
        """Degree of the field of definition."""
        F = self.field
        d = 1
        for c in self.coords:
            md = F.minimal_degree(c)
            d = d * md // gcd(d, md)
        return d

    def minimal(self):
        d = self.degree
        if d == self.field_degree:
            return self
        return ProjPoint(d, tuple(restrict_value(c, self.field_degree, d) for c in self.coords))

    def orbit(self):
        """Frobenius conjugates over GF(3), in order P, s(P), s^2(P), ..."""
        P = self.minimal()
        return [P.frobenius(i) for i in range(P.field_degree)]

    def __str__(self):
        F = self.field
        return "(" + ":".join(F.format(c) for c in self.coords) + ")"


def parse_point(text: str, field_degree: int | None = None) -> ProjPoint:
    body = text.strip().strip("()")
    parts = re.split(r"[:;]", body)
    if len(parts) != 3:
        raise ValueError(f"expected three coordinates in {text!r}")
    need = 1
    for p in parts:
        d = _coef_degree(p.strip())
        need = need * d // gcd(need, d)
    k = field_degree or need
    return ProjPoint.make([parse_value(p, k) for p in parts], k).minimal()


def common_degree(points):
    d = 1
    for P in points:
        d = d * P.field_degree // gcd(d, P.field_degree)
    return d


def _pm_matrix_f3(F, M):
    return [[F.from_int(v) for v in row] for row in M]


def apply_matrix(M, P: ProjPoint) -> ProjPoint:
    """Image of P under a 3x3 matrix M over GF(3) given as residues."""
    F = P.field
    coords = []
    for row in M:
        acc = 0
        for a, c in zip(row, P.coords):
            if a and c:
                acc = F.add(acc, c if a == 1 else F.neg(c))
        coords.append(acc)
    return ProjPoint.make(coords, P.field_degree)


# --- local expansions --------------------------------------------------------

def taylor_terms(exps, P: ProjPoint, F):
    """Shifted local expansion of the monomial x^exps at P, as {(s, t): value} over F."""
    k = P.chart
    i, j = [r for r in range(3) if r != k]
    pi, pj = P.coords[i], P.coords[j]
    ei, ej = exps[i], exps[j]
    out = {}
    pw = F.pow
    for s in range(ei + 1):
        b1 = comb(ei, s) % 3
        if not b1:
            continue
        v1 = F.mul(F.from_int(b1), pw(pi, ei - s))
        if not v1:
            continue
        for t in range(ej + 1):
            b2 = comb(ej, t) % 3
            if not b2:
                continue
            v = F.mul(v1, F.mul(F.from_int(b2), pw(pj, ej - t)))
            if v:
                out[(s, t)] = v
    return out


def taylor_at(Fpoly: MPoly, P: ProjPoint) -> MPoly:
    """F in the affine chart of P, shifted so that P is the origin (variables X, Y)."""
    L = max(P.field_degree, Fpoly.field.degree)
    if L % P.field_degree or L % Fpoly.field.degree:
        L = P.field_degree * Fpoly.field.degree // gcd(P.field_degree, Fpoly.field.degree)
    G = Fpoly.embed(L)
    Q = P.embed(L)
    E = get_field(L)
    out = {}
    for m, c in G.terms.items():
        for st, v in taylor_terms(m, Q, E).items():
            out[st] = E.add(out.get(st, 0), E.mul(c, v))
    return MPoly(E, 2, out, VARS2)


def blowup_strict_transform(g: MPoly, m: int, chart: int = 1) -> MPoly:
    """Strict transform of a plane germ at the origin under one blow-up.

    chart 1: G(X, Z X) / X^m in variables (X, Z); chart 2: G(Z Y, Y) / Y^m in (Z, Y).
    """
    out = {}
    for (a, b), c in g.terms.items():
        if a + b < m:
            raise ValueError(f"term X^{a}Y^{b} has degree below the multiplicity {m}")
        key = (a + b - m, b) if chart == 1 else (a, a + b - m)
        out[key] = c
    names = ("X", "Z") if chart == 1 else ("Z", "Y")
    return MPoly(g.field, 2, out, names)


# --- divisibility ------------------------------------------------------------

def form_divmod(F: MPoly, g: MPoly):
    """Multivariate division by a single divisor (lex order): (quotient, remainder)."""
    if not g.terms:
        raise ZeroDivisionError("division by the zero form")
    L = F.field.degree * g.field.degree // gcd(F.field.degree, g.field.degree)
    F, g = F.embed(L), g.embed(L)
    E = F.field
    lm = max(g.terms)
    inv = E.inv(g.terms[lm])
    rem = dict(F.terms)
    quo = {}
    out_rem = {}
    gt = [(m, E.neg(c)) for m, c in g.terms.items()]
    while rem:
        m = max(rem)
        c = rem[m]
        if all(a >= b for a, b in zip(m, lm)):
            shift = tuple(a - b for a, b in zip(m, lm))
            fac = E.mul(c, inv)
            quo[shift] = fac
            for mg, cg in gt:
                mm = tuple(a + b for a, b in zip(mg, shift))
                v = E.add(rem.get(mm, 0), E.mul(fac, cg))
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        else:
            out_rem[m] = c
            del rem[m]
    return MPoly(E, F.nvars, quo, F.names), MPoly(E, F.nvars, out_rem, F.names)


def form_divides(g: MPoly, F: MPoly) -> bool:
    """True iff g divides F."""
    if not g.terms:
        raise ZeroDivisionError("zero divisor")
    if not F.terms:
        return True
    if g.degree() > F.degree():
        return False
    L = F.field.degree * g.field.degree // gcd(F.field.degree, g.field.degree)
    F, g = F.embed(L), g.embed(L)
    E = F.field
    lm = max(g.terms)
    inv = E.inv(g.terms[lm])
    gt = [(m, E.neg(c)) for m, c in g.terms.items()]
    rem = dict(F.terms)
    while rem:
        m = max(rem)
        if any(a < b for a, b in zip(m, lm)):
            return False
        shift = tuple(a - b for a, b in zip(m, lm))
        fac = E.mul(rem[m], inv)
        for mg, cg in gt:
            mm = tuple(a + b for a, b in zip(mg, shift))
            v = E.add(rem.get(mm, 0), E.mul(fac, cg))
            if v:
                rem[mm] = v
            else:
                rem.pop(mm, None)
    return True


def line_through(P: ProjPoint, Q: ProjPoint) -> MPoly:
    """Linear form vanishing at P and Q (cross product), over their common field."""
    L = P.field_degree * Q.field_degree // gcd(P.field_degree, Q.field_degree)
    E = get_field(L)
    p, q = P.embed(L).coords, Q.embed(L).coords
    cr = [E.sub(E.mul(p[1], q[2]), E.mul(p[2], q[1])),
          E.sub(E.mul(p[2], q[0]), E.mul(p[0], q[2])),
          E.sub(E.mul(p[0], q[1]), E.mul(p[1], q[0]))]
    return MPoly(E, 3, {(1, 0, 0): cr[0], (0, 1, 0): cr[1], (0, 0, 1): cr[2]}).monic()


def det3(E, a, b, c):
    m, s, ad = E.mul, E.sub, E.add
    return ad(ad(m(a[0], s(m(b[1], c[2]), m(b[2], c[1]))),
                 m(a[1], s(m(b[2], c[0]), m(b[0], c[2])))),
              m(a[2], s(m(b[0], c[1]), m(b[1], c[0]))))


def collinear(points) -> bool:
    """True iff the given projective points lie on one line."""
    pts = list(points)
    if len(pts) <= 2:
        return True
    L = common_degree(pts)
    E = get_field(L)
    cs = [P.embed(L).coords for P in pts]
    a = cs[0]
    b = next((c for c in cs[1:] if c != a), None)
    if b is None:
        return True
    return all(not det3(E, a, b, c) for c in cs)


def form_from_point_eval(F: MPoly, P: ProjPoint):
    L = F.field.degree * P.field_degree // gcd(F.field.degree, P.field_degree)
    return F.embed(L).evaluate(P.embed(L).coords)

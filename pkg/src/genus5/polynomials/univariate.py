"""Dense univariate polynomials over a finite field of characteristic 3.

The module-level helpers operate on plain coefficient lists (lowest degree
first, no trailing zeros) together with a field object implementing the
:class:`~genus5.field_tower.GF` interface.  :class:`UniPoly` is a thin
immutable wrapper for callers that prefer operators.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..field_tower import GF, FieldError, embed_value, get_field, restrict_value


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a):
    return len(a) - 1


def padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    add = F.add
    for i, c in enumerate(b):
        r[i] = add(r[i], c)
    return trim(r)


def pneg(F, a):
    return [F.neg(c) for c in a]


def psub(F, a, b):
    return padd(F, a, pneg(F, b))


def pscale(F, a, c):
    if not c:
        return []
    return trim([F.mul(x, c) for x in a])


def pmul(F, a, b):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    r[i + j] = add(r[i + j], mul(x, y))
    return trim(r)


def pdivmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    inv = F.inv(b[-1])
    q = [0] * (len(a) - db)
    add, mul, neg = F.add, F.mul, F.neg
    nb = [neg(c) for c in b]
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            c = mul(c, inv)
            q[k - db] = c
            for j in range(db + 1):
                if nb[j]:
                    a[k - db + j] = add(a[k - db + j], mul(c, nb[j]))
    return trim(q), trim(a[:db])


def pmod(F, a, b):
    return pdivmod(F, a, b)[1]


def pmonic(F, a):
    if not a:
        return []
    if a[-1] == 1:
        return list(a)
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pxgcd(F, a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(F, s0, pmul(F, q, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, q, t1))
    if not r0:
        return [], s0, t0
    inv = F.inv(r0[-1])
    return pscale(F, r0, inv), pscale(F, s0, inv), pscale(F, t0, inv)


def ppowmod(F, base, e, mod):
    """base^e mod `mod` by square-and-multiply."""
    result = [1]
    base = pmod(F, base, mod)
    while e:
        if e & 1:
            result = pmod(F, pmul(F, result, base), mod)
        e >>= 1
        if e:
            base = pmod(F, pmul(F, base, base), mod)
    return pmod(F, result, mod)


def pderiv(F, a):
    return trim([F.mul(c, F.from_int(i)) for i, c in enumerate(a)][1:])


def peval(F, a, x):
    acc = 0
    add, mul = F.add, F.mul
    for c in reversed(a):
        acc = add(mul(acc, x), c)
    return acc


def pcompose(F, a, b):
    acc = []
    for c in reversed(a):
        acc = padd(F, pmul(F, acc, b), [c] if c else [])
    return acc


def from_roots(F, roots):
    out = [1]
    for r in roots:
        out = pmul(F, out, [F.neg(r), 1])
    return out


def embed_poly(a, src: int, dst: int):
    return [embed_value(c, src, dst) for c in a]


def _x_to_q(F, f, q):
    return ppowmod(F, [0, 1], q, f)


def count_roots(F, f, m: int | None = None) -> int:
    """Number of distinct roots of f in GF(3^m) (default: the coefficient field).

    Computed as deg gcd(x^(3^m) - x, f) with x^(3^m) reduced modulo f.
    """
    if not f:
        raise ValueError("zero polynomial has every element as a root")
    if m is not None and isinstance(F, GF) and m != F.degree:
        if m % F.degree:
            raise FieldError(f"GF(3^{F.degree}) is not a subfield of GF(3^{m})")
        f = embed_poly(f, F.degree, m)
        F = get_field(m)
    if len(f) == 1:
        return 0
    h = _x_to_q(F, f, F.q)
    g = pgcd(F, psub(F, h, [0, 1]), f)
    return deg(g)


def squarefree_decomposition(F, f):
    """List of (g, i) with f = lc * prod g^i, each g monic squarefree and pairwise coprime."""
    f = pmonic(F, f)
    if len(f) <= 1:
        return []
    out = []
    c = pgcd(F, f, pderiv(F, f))
    w = pdivmod(F, f, c)[0]
    i = 1
    while len(w) > 1:
        y = pgcd(F, w, c)
        fac = pdivmod(F, w, y)[0]
        if len(fac) > 1:
            out.append((fac, i))
        w = y
        c = pdivmod(F, c, y)[0]
        i += 1
    if len(c) > 1:
        # c is a polynomial in x^3
        root = [F.pth_root(c[3 * k]) for k in range((len(c) - 1) // 3 + 1)]
        for g, j in squarefree_decomposition(F, root):
            out.append((g, 3 * j))
    return out


def distinct_degree(F, f):
    """Split a monic squarefree f into (product of all degree-d irreducible factors, d)."""
    out = []
    i = 1
    fs = list(f)
    h = [0, 1]
    while deg(fs) >= 2 * i:
        h = ppowmod(F, h, F.q, fs)
        g = pgcd(F, psub(F, h, [0, 1]), fs)
        if len(g) > 1:
            out.append((g, i))
            fs = pdivmod(F, fs, g)[0]
            h = pmod(F, h, fs)
        i += 1
    if len(fs) > 1:
        out.append((fs, deg(fs)))
    return out


def equal_degree(F, f, d, rng=None):
    """Split f (monic, squarefree, all factors of degree d) into its irreducible factors."""
    rng = rng or random.Random(0)
    n = deg(f)
    if n == d:
        return [f]
    e = (F.q ** d - 1) // 2
    while True:
        a = trim([F.random(rng) for _ in range(n)])
        if len(a) < 2:
            continue
        b = ppowmod(F, a, e, f)
        g = pgcd(F, psub(F, b, [1]), f)
        if 0 < deg(g) < n:
            return (equal_degree(F, g, d, rng)
                    + equal_degree(F, pdivmod(F, f, g)[0], d, rng))


def factor(F, f, rng=None):
    """Complete factorization: list of (monic irreducible, multiplicity), sorted."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    rng = rng or random.Random(0)
    out = []
    for g, i in squarefree_decomposition(F, f):
        for h, d in distinct_degree(F, g):
            for p in equal_degree(F, h, d, rng):
                out.append((p, i))
    out.sort(key=lambda t: (len(t[0]), t[0], t[1]))
    return out


def roots(F, f, rng=None):
    """Distinct roots of f lying in F, sorted."""
    if not f:
        raise ValueError("zero polynomial")
    f = pmonic(F, f)
    if len(f) == 1:
        return []
    h = _x_to_q(F, f, F.q)
    g = pgcd(F, psub(F, h, [0, 1]), f)
    if len(g) == 1:
        return []
    lin = equal_degree(F, g, 1, rng)
    return sorted(F.neg(p[0]) for p in lin)


def _radical(F, f):
    out = [1]
    for g, _ in squarefree_decomposition(F, f):
        out = pmul(F, out, g)
    return out


def radical(F, f):
    return _radical(F, pmonic(F, f))


def is_irreducible(F, f):
    f = pmonic(F, f)
    n = deg(f)
    if n < 1:
        return False
    if len(pgcd(F, f, pderiv(F, f))) > 1:
        return False
    return distinct_degree(F, f) == [(f, n)]


# --- determinants and resultants

def det(F, M):
    """Determinant of a square matrix over F by Gaussian elimination."""
    M = [list(r) for r in M]
    n = len(M)
    d = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg(d)
        pv = M[c][c]
        d = F.mul(d, pv)
        inv = F.inv(pv)
        for r in range(c + 1, n):
            if M[r][c]:
                fac = F.neg(F.mul(M[r][c], inv))
                row, prow = M[r], M[c]
                for k in range(c, n):
                    if prow[k]:
                        row[k] = F.add(row[k], F.mul(fac, prow[k]))
    return d


def sylvester(f, g, m=None, n=None):
    """Sylvester matrix of f (formal degree m) and g (formal degree n); entries are coefficients."""
    m = len(f) - 1 if m is None else m
    n = len(g) - 1 if n is None else n
    f = list(f) + [0] * (m + 1 - len(f))
    g = list(g) + [0] * (n + 1 - len(g))
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j in range(m + 1):
            row[i + j] = f[m - j]
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j in range(n + 1):
            row[i + j] = g[n - j]
        rows.append(row)
    return rows


def resultant(F, f, g):
    """Resultant of two univariate polynomials over F (determinant of the Sylvester matrix)."""
    if len(f) <= 1 and len(g) <= 1:
        raise ValueError("both inputs constant")
    if not f or not g:
        return 0
    return det(F, sylvester(f, g))


def interpolate(F, xs, ys):
    """Newton interpolation: the polynomial of degree < len(xs) through the points."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = F.div(F.sub(coef[i], coef[i - 1]), F.sub(xs[i], xs[i - j]))
    out = []
    for i in range(n - 1, -1, -1):
        out = pmul(F, out, [F.neg(xs[i]), 1])
        out = padd(F, out, [coef[i]] if coef[i] else [])
    return out


def resultant_poly(F, f, g):
    """Res_t(f, g) where f, g are lists (in t) of coefficient polynomials in u over F.

    Evaluation at enough points of an extension of F, exact interpolation,
    and restriction back to F.
    """
    m, n = len(f) - 1, len(g) - 1
    if m < 1 and n < 1:
        raise ValueError("both inputs constant in the eliminated variable")
    if m < 0 or n < 0:
        return []
    S = sylvester(f, g, m, n)
    bound = sum(max((len(c) - 1 for c in row if c), default=0) for row in S)
    k = F.degree
    ext = k
    while 3 ** ext <= bound + 1:
        ext += k
    E = get_field(ext)
    xs = list(range(1, bound + 2))  # distinct stored values of E
    fe = [embed_poly(c, k, ext) for c in f]
    ge = [embed_poly(c, k, ext) for c in g]
    ys = []
    for x in xs:
        fv = [peval(E, c, x) for c in fe]
        gv = [peval(E, c, x) for c in ge]
        ys.append(det(E, sylvester(fv, gv, m, n)))
    r = interpolate(E, xs, ys)
    return [restrict_value(c, ext, k) for c in r]


@dataclass(frozen=True)
class UniPoly:
    """Polynomial over GF(3^field_degree); coefficients stored, lowest degree first."""

    field_degree: int
    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        trim(c)
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def field(self):
        return get_field(self.field_degree)

    @classmethod
    def from_ints(cls, ints, field_degree=1):
        F = get_field(field_degree)
        return cls(field_degree, tuple(F.from_int(i) for i in ints))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def _wrap(self, c):
        return UniPoly(self.field_degree, tuple(c))

    def __add__(self, o):
        return self._wrap(padd(self.field, list(self.coeffs), list(o.coeffs)))

    def __sub__(self, o):
        return self._wrap(psub(self.field, list(self.coeffs), list(o.coeffs)))

    def __mul__(self, o):
        return self._wrap(pmul(self.field, list(self.coeffs), list(o.coeffs)))

    def __divmod__(self, o):
        q, r = pdivmod(self.field, list(self.coeffs), list(o.coeffs))
        return self._wrap(q), self._wrap(r)

    def __mod__(self, o):
        return divmod(self, o)[1]

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def __bool__(self):
        return bool(self.coeffs)

    def monic(self):
        return self._wrap(pmonic(self.field, list(self.coeffs)))

    def derivative(self):
        return self._wrap(pderiv(self.field, list(self.coeffs)))

    def __call__(self, x):
        return peval(self.field, self.coeffs, x)

    def __str__(self):
        F = self.field
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            cs = F.format(c)
            if mono and cs == "1":
                terms.append(mono)
            elif mono:
                terms.append(f"{cs}*{mono}")
            else:
                terms.append(cs)
        return " + ".join(reversed(terms)) or "0"


def uni_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    if f.field_degree != g.field_degree:
        raise FieldError("operands over different fields")
    return f._wrap(pgcd(f.field, list(f.coeffs), list(g.coeffs)))


def uni_count_roots(f: UniPoly, ext_degree: int) -> int:
    return count_roots(f.field, list(f.coeffs), ext_degree)


def uni_factor(f: UniPoly, seed: int = 0):
    rng = random.Random(seed)
    return [(f._wrap(g), e) for g, e in factor(f.field, list(f.coeffs), rng)]

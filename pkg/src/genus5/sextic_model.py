"""Plane sextic models of canonical genus-5 curves.

A canonical non-trigonal genus-5 curve is an intersection of three
quadrics in P^4.  With the marked points moved to (1:0:0:0:0) and
(0:0:0:0:1) each quadric reads

    phi_i = a_i x0 x4 + f_i x0 + g_i x4 + h_i

and projecting from the line through the two points gives the sextic
det(A) v1 - v2 v3 in P^2 = Proj k[x1, x2, x3], where A has rows
(a), (f), (g) and (v1, v2, v3) = -(h1, h2, h3) adj(A).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .field_tower import get_field
from .polynomials.forms import VARS5, MPoly, monomials, parse_poly


class NotVanishingAtPQ(ValueError):
    """A quadric has a nonzero x0^2 or x4^2 coefficient."""


class DegenerateDetA(ValueError):
    """det(A) vanishes identically (hyperelliptic or degenerate input)."""


@dataclass(frozen=True)
class QuadricParts:
    a: int
    f: MPoly
    g: MPoly
    h: MPoly


def _ternary(F, terms):
    return MPoly(F, 3, terms)


def decompose(phi: MPoly) -> QuadricParts:
    """Split a quinary quadric into a*x0x4 + f*x0 + g*x4 + h."""
    F = phi.field
    if phi.coeff((2, 0, 0, 0, 0)) or phi.coeff((0, 0, 0, 0, 2)):
        raise NotVanishingAtPQ("quadric does not vanish at (1:0:0:0:0) and (0:0:0:0:1)")
    a = phi.coeff((1, 0, 0, 0, 1))
    f, g, h = {}, {}, {}
    for m, c in phi.terms.items():
        if sum(m) != 2:
            raise ValueError("not a quadratic form")
        e0, rest, e4 = m[0], m[1:4], m[4]
        if e0 and e4:
            continue
        if e0:
            f[rest] = c
        elif e4:
            g[rest] = c
        else:
            h[rest] = c
    return QuadricParts(a, _ternary(F, f), _ternary(F, g), _ternary(F, h))


def recompose(parts: QuadricParts) -> MPoly:
    F = parts.f.field
    t = {}
    if parts.a:
        t[(1, 0, 0, 0, 1)] = parts.a
    for m, c in parts.f.terms.items():
        t[(1,) + m + (0,)] = c
    for m, c in parts.g.terms.items():
        t[(0,) + m + (1,)] = c
    for m, c in parts.h.terms.items():
        t[(0,) + m + (0,)] = c
    return MPoly(F, 5, t, VARS5)


@dataclass(frozen=True)
class QuadricTriple:
    phis: tuple

    @classmethod
    def parse(cls, texts, field_degree=None):
        phis = [parse_poly(t, VARS5, field_degree) for t in texts]
        k = max(p.field.degree for p in phis)
        return cls(tuple(p.embed(k) for p in phis))

    @property
    def field(self):
        return self.phis[0].field

    def parts(self):
        return [decompose(p) for p in self.phis]

    def __str__(self):
        return "; ".join(str(p) for p in self.phis)


def _det2(a, b, c, d):
    return a * d - b * c


def adjugate_data(parts):
    """(A as ternary forms, cofactor matrix C) with C[i][j] the (i, j) cofactor."""
    F = parts[0].f.field
    A = [[MPoly.const(F, 3, p.a) for p in parts], [p.f for p in parts], [p.g for p in parts]]
    C = [[None] * 3 for _ in range(3)]
    for i in range(3):
        r = [x for x in range(3) if x != i]
        for j in range(3):
            c = [x for x in range(3) if x != j]
            m = _det2(A[r[0]][c[0]], A[r[0]][c[1]], A[r[1]][c[0]], A[r[1]][c[1]])
            C[i][j] = m if (i + j) % 2 == 0 else -m
    return A, C


def sextic_pieces(T: QuadricTriple):
    """det(A), v1, v2, v3 as ternary forms."""
    parts = T.parts()
    A, C = adjugate_data(parts)
    detA = A[0][0] * C[0][0] + A[0][1] * C[0][1] + A[0][2] * C[0][2]
    hs = [p.h for p in parts]
    # adj(A)[i][j] = C[j][i]; v_j = -sum_i h_i adj(A)[i][j]
    v = []
    for j in range(3):
        acc = MPoly.zero(detA.field, 3)
        for i in range(3):
            acc = acc + hs[i] * C[j][i]
        v.append(-acc)
    return detA, v[0], v[1], v[2]


def build_sextic(T: QuadricTriple) -> MPoly:
    """The plane sextic det(A) v1 - v2 v3 of a quadric triple."""
    detA, v1, v2, v3 = sextic_pieces(T)
    if detA.is_zero():
        raise DegenerateDetA("det(A) is identically zero")
    for name, form, d in (("det(A)", detA, 2), ("v1", v1, 4), ("v2", v2, 3), ("v3", v3, 3)):
        if form and (form.degree() != d or not form.is_homogeneous()):
            raise AssertionError(f"{name} has unexpected degree {form.degree()}")
    S = detA * v1 - v2 * v3
    if S and (S.degree() != 6 or not S.is_homogeneous()):
        raise AssertionError("sextic construction is not homogeneous of degree 6")
    return S


# --- transformations -------------------------------------------------------

def change_basis(T: QuadricTriple, B) -> QuadricTriple:
    """(phi1, phi2, phi3) B for a 3x3 matrix B of stored field values."""
    F = T.field
    out = []
    for j in range(3):
        acc = MPoly.zero(F, 5, VARS5)
        for i in range(3):
            if B[i][j]:
                acc = acc + T.phis[i].scale(B[i][j])
        out.append(acc)
    return QuadricTriple(tuple(out))


def swap_marked_points(T: QuadricTriple) -> QuadricTriple:
    """Coordinate change x0 <-> x4."""
    out = []
    for p in T.phis:
        out.append(MPoly(p.field, 5, {(m[4],) + m[1:4] + (m[0],): c for m, c in p.terms.items()}, VARS5))
    return QuadricTriple(tuple(out))


def _lift_linear(form: MPoly, F):
    """Ternary linear form in x1..x3 as a quinary form."""
    return MPoly(F, 5, {(0,) + m + (0,): c for m, c in form.terms.items()}, VARS5)


def shear(T: QuadricTriple, phi: MPoly, psi: MPoly) -> QuadricTriple:
    """Coordinate change (x0, .., x4) -> (x0 + phi, x1, x2, x3, x4 + psi)."""
    k = max(T.field.degree, phi.field.degree, psi.field.degree)
    F = get_field(k)
    xs = [MPoly.var(F, 5, i, VARS5) for i in range(5)]
    xs[0] = xs[0] + _lift_linear(phi.embed(k), F)
    xs[4] = xs[4] + _lift_linear(psi.embed(k), F)
    return QuadricTriple(tuple(p.embed(k).substitute(xs) for p in T.phis))


def det3_field(F, M):
    m, s, a = F.mul, F.sub, F.add
    return a(a(m(M[0][0], s(m(M[1][1], M[2][2]), m(M[1][2], M[2][1]))),
               m(M[0][1], s(m(M[1][2], M[2][0]), m(M[1][0], M[2][2])))),
             m(M[0][2], s(m(M[1][0], M[2][1]), m(M[1][1], M[2][0]))))


def observed_scalar(S: MPoly, S2: MPoly):
    """c with S2 = c * S, or None."""
    return S.scalar_ratio(S2)


def shear_invariance_check(T: QuadricTriple, phi: MPoly, psi: MPoly) -> bool:
    """True iff shearing the triple leaves the sextic unchanged up to a nonzero scalar."""
    S = build_sextic(T)
    k = max(T.field.degree, phi.field.degree, psi.field.degree)
    S2 = build_sextic(shear(T, phi, psi))
    c = S.embed(k).scalar_ratio(S2)
    return c is not None and c != 0


# --- random inputs ----------------------------------------------------------

QUINARY_QUADRIC_MONOMIALS = tuple(m for m in monomials(5, 2) if m not in ((2, 0, 0, 0, 0), (0, 0, 0, 0, 2)))


def random_triple(rng: random.Random, field_degree: int = 1) -> QuadricTriple:
    """Three random quadrics through (1:0:0:0:0) and (0:0:0:0:1)."""
    F = get_field(field_degree)
    phis = []
    for _ in range(3):
        t = {m: F.random(rng) for m in QUINARY_QUADRIC_MONOMIALS}
        phis.append(MPoly(F, 5, t, VARS5))
    return QuadricTriple(tuple(phis))


def random_linear(rng: random.Random, field_degree: int = 1) -> MPoly:
    F = get_field(field_degree)
    return MPoly(F, 3, {m: F.random(rng) for m in monomials(3, 1)})


def random_invertible(rng: random.Random, field_degree: int = 1):
    F = get_field(field_degree)
    while True:
        B = [[F.random(rng) for _ in range(3)] for _ in range(3)]
        if det3_field(F, B):
            return B


# --- brute-force P^4 oracle -------------------------------------------------

def _eval_vec(p: MPoly, F, cols):
    """Evaluate a form on arrays of coordinates (one array per variable)."""
    acc = np.zeros_like(cols[0])
    for m, c in p.terms.items():
        term = np.full_like(cols[0], c)
        for x, e in zip(cols, m):
            if e:
                term = F.vmul(term, F.vpow(x, e))
        acc = F.vadd(acc, term)
    return acc


def _p2_with_zero(F):
    """All normalized points of P^2(F) as three arrays of stored values."""
    q = F.q
    pts = []
    for a in range(q):
        for b in range(q):
            pts.append((1, a, b))
    for b in range(q):
        pts.append((0, 1, b))
    pts.append((0, 0, 1))
    return np.array(pts, dtype=np.int64).T


def p4_points(T: QuadricTriple, k: int):
    """All points of V(phi1, phi2, phi3) in P^4(GF(3^k)) as stored-value 5-tuples.

    Each phi_i is linear in x4 once x0..x3 are fixed, so the enumeration runs
    over (x1:x2:x3) in P^2 and x0 in the field and solves for x4.
    """
    F = get_field(k)
    phis = [p.embed(k) if p.field.degree != k else p for p in T.phis]
    parts = [decompose(p) for p in phis]
    q = F.q
    P2 = _p2_with_zero(F)
    npts = P2.shape[1]
    x0 = np.repeat(np.arange(q, dtype=np.int64)[None, :], npts, axis=0).ravel()
    p = [np.repeat(P2[i], q) for i in range(3)]
    cs, ds = [], []
    for pr in parts:
        fv = _eval_vec(pr.f, F, p)
        gv = _eval_vec(pr.g, F, p)
        hv = _eval_vec(pr.h, F, p)
        c = F.vadd(F.vmul(np.full_like(x0, pr.a), x0), gv)
        d = F.vadd(F.vmul(fv, x0), hv)
        cs.append(c)
        ds.append(d)
    cs = np.array(cs)
    ds = np.array(ds)
    out = []
    free = (cs == 0).all(axis=0) & (ds == 0).all(axis=0)
    for idx in np.nonzero(free)[0]:
        for x4 in range(q):
            out.append((int(x0[idx]), int(p[0][idx]), int(p[1][idx]), int(p[2][idx]), x4))
    has = (cs != 0).any(axis=0)
    first = np.argmax(cs != 0, axis=0)
    cols = np.arange(cs.shape[1])
    c1 = cs[first, cols]
    d1 = ds[first, cols]
    x4s = F.vneg(F.vmul(d1, F.vinv(c1)))
    ok = has.copy()
    for i in range(3):
        ok &= F.vadd(F.vmul(cs[i], x4s), ds[i]) == 0
    for idx in np.nonzero(ok)[0]:
        out.append((int(x0[idx]), int(p[0][idx]), int(p[1][idx]), int(p[2][idx]), int(x4s[idx])))
    # x1 = x2 = x3 = 0: phi_i = a_i x0 x4
    out.append((1, 0, 0, 0, 0))
    out.append((0, 0, 0, 0, 1))
    if not any(pr.a for pr in parts):
        out.extend((1, 0, 0, 0, t) for t in range(1, q))
    return out


def count_p4_points(T: QuadricTriple, k: int) -> int:
    return len(p4_points(T, k))


def count_p4_naive(T: QuadricTriple, k: int) -> int:
    """Direct scan of every point of P^4(GF(3^k)); slow, for cross-checks."""
    F = get_field(k)
    phis = [p.embed(k) for p in T.phis]
    q = F.q
    n = 0
    for lead in range(5):
        for tail in itertools.product(range(q), repeat=4 - lead):
            v = (0,) * lead + (1,) + tail
            if all(not p.evaluate(v) for p in phis):
                n += 1
    return n


def _gradient(p: MPoly):
    return [p.derivative(i) for i in range(5)]


def p4_is_smooth(T: QuadricTriple, max_degree: int = 4) -> bool:
    """No point of V(phi) over GF(3^k), k <= max_degree, has Jacobian rank below 3."""
    for k in range(1, max_degree + 1):
        F = get_field(k)
        phis = [p.embed(k) for p in T.phis]
        grads = [_gradient(p) for p in phis]
        for pt in p4_points(T, k):
            J = [[g.evaluate(pt) for g in row] for row in grads]
            if not any(det3_field(F, [[J[r][c] for c in cols] for r in range(3)])
                       for cols in itertools.combinations(range(5), 3)):
                return False
    return True

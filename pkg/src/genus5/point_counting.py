"""Point counts, geometric irreducibility and Weil polynomials over GF(9).

The plane count #C'(GF(3^e)) runs fiber by fiber over x in GF(3^e): each
fiber contributes deg gcd(y^q - y, F(x, y, 1)), and the line z = 0 is
handled separately.  The smooth model adds, for every rational singular
point P, the correction #V(h_P) - 1 read off the tangent cone h_P.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from functools import lru_cache

import numpy as np

from . import _kernels
from .field_tower import embed_value, get_field
from .polynomials import univariate as U
from .polynomials.forms import SEXTIC_MONOMIALS, MPoly, det3, form_divides, monomials
from .singularity import SingularConfig, tangent_adjustment, tangent_cone

log = logging.getLogger(__name__)

Q_BASE = 9
GENUS = 5
IRREDUCIBILITY_DEGREE = 6
# Aubry-Perret: a geometrically irreducible sextic (arithmetic genus 10) has
# at most 729 + 1 + 2*10*27 points over GF(3^6).
IRREDUCIBILITY_BOUND = 3 ** 6 + 1 + 2 * 10 * 27


class WeilBoundViolation(ArithmeticError):
    pass


# --- plane counts --------------------------------------------------------------

def _terms_in(F: MPoly, e: int):
    """(a, b, stored value) triples of F(x, y, 1) over GF(3^e)."""
    src = F.field.degree
    acc = {}
    E = get_field(e)
    for m, c in F.terms.items():
        key = (m[0], m[1])
        acc[key] = E.add(acc.get(key, 0), embed_value(c, src, e))
    items = [(a, b, v) for (a, b), v in acc.items() if v]
    arr = np.array(items, dtype=np.int64).reshape(-1, 3)
    return arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy()


def count_affine_chart(F: MPoly, e: int) -> int:
    """#{(x, y) in GF(3^e)^2 : F(x, y, 1) = 0}."""
    E = get_field(e)
    a, b, v = _terms_in(F, e)
    if a.size == 0:
        return E.q * E.q
    return int(_kernels.count_affine(a, b, v, e, E.zech_np, E.half, E.n, E.q))


def count_line_at_infinity(F: MPoly, e: int) -> int:
    """Points of V(F) on z = 0 over GF(3^e)."""
    E = get_field(e)
    src = F.field.degree
    t = {}
    for m, c in F.terms.items():
        if m[2] == 0:
            t[m[0]] = E.add(t.get(m[0], 0), embed_value(c, src, e))
    n = max(t, default=-1)
    f = U.trim([t.get(i, 0) for i in range(n + 1)])  # F(x, 1, 0)
    if not f:
        return E.q + 1
    count = U.count_roots(E, f) if U.deg(f) > 0 else 0
    if not F.coeff((F.degree(), 0, 0)):
        count += 1  # (1:0:0)
    return count


def count_plane_curve(F: MPoly, e: int) -> int:
    """#V(F)(GF(3^e)) in P^2, for e <= 10."""
    if F.is_zero():
        raise ValueError("zero form")
    if e % F.field.degree:
        raise ValueError("the form is not defined over GF(3^e)")
    return count_affine_chart(F, e) + count_line_at_infinity(F, e)


def _p2_points(e: int):
    """Stored-value coordinates of all normalized points of P^2(GF(3^e))."""
    q = 3 ** e
    xs, ys, zs = [], [], []
    a = np.arange(q, dtype=np.int64)
    xs.append(np.ones(q * q, dtype=np.int64))
    ys.append(np.repeat(a, q))
    zs.append(np.tile(a, q))
    xs.append(np.zeros(q, dtype=np.int64))
    ys.append(np.ones(q, dtype=np.int64))
    zs.append(a)
    xs.append(np.zeros(1, dtype=np.int64))
    ys.append(np.zeros(1, dtype=np.int64))
    zs.append(np.ones(1, dtype=np.int64))
    return np.concatenate(xs), np.concatenate(ys), np.concatenate(zs)


def evaluate_on_points(F: MPoly, e: int, pts=None):
    E = get_field(e)
    X, Y, Z = pts if pts is not None else _p2_points(e)
    src = F.field.degree
    acc = np.zeros_like(X)
    for m, c in F.terms.items():
        t = np.full_like(X, embed_value(c, src, e))
        for col, k in zip((X, Y, Z), m):
            if k:
                t = E.vmul(t, E.vpow(col, k))
        acc = E.vadd(acc, t)
    return acc


def count_plane_curve_scan(F: MPoly, e: int) -> int:
    """Exhaustive evaluation over every point of P^2(GF(3^e)); slow cross-check."""
    return int(np.count_nonzero(evaluate_on_points(F, e) == 0))


# --- smooth model --------------------------------------------------------------

@lru_cache(maxsize=4096)
def _cone(F: MPoly, P):
    return tangent_cone(F, P)


def adjustment_sum(F: MPoly, config: SingularConfig, e: int, zero_adjustments=False) -> int:
    total = 0
    for P, _m in config.points:
        if e % P.field_degree:
            continue
        if not zero_adjustments:
            total += tangent_adjustment(_cone(F, P), e)
    return total


def count_smooth_model(F: MPoly, config: SingularConfig, e: int, plane_count: int | None = None,
                       zero_adjustments: bool = False) -> int:
    """#C(GF(3^e)) for the normalization C of a non-special sextic model."""
    base = count_plane_curve(F, e) if plane_count is None else plane_count
    return base + adjustment_sum(F, config, e, zero_adjustments)


@dataclass
class CountVector:
    N: tuple
    base: int = Q_BASE
    plane: tuple = ()

    def __post_init__(self):
        for m, n in enumerate(self.N, start=1):
            qm = self.base ** m
            bound = 2 * GENUS * int(round(self.base ** (m / 2)))
            if not 0 <= n <= qm + 1 + bound or n < qm + 1 - bound:
                raise WeilBoundViolation(f"N_{m} = {n} violates the Weil bound over GF({self.base}^{m})")


def count_vector(F: MPoly, config: SingularConfig, max_m: int = 5) -> CountVector:
    planes, Ns = [], []
    for m in range(1, max_m + 1):
        p = count_plane_curve(F, 2 * m)
        planes.append(p)
        Ns.append(p + adjustment_sum(F, config, 2 * m))
    return CountVector(tuple(Ns), Q_BASE, tuple(planes))


# --- Weil polynomials ----------------------------------------------------------

@dataclass(frozen=True)
class WeilPoly:
    """Monic degree-2g polynomial, coefficients c_0..c_2g (c_i of t^i)."""

    coeffs: tuple
    q: int = Q_BASE

    @property
    def genus(self):
        return (len(self.coeffs) - 1) // 2

    def satisfies_functional_equation(self) -> bool:
        g, c = self.genus, self.coeffs
        return all(c[i] == self.q ** (g - i) * c[2 * g - i] for i in range(g))

    def root_moduli(self):
        # repeated roots are numerically ill-conditioned, so use the squarefree part
        sf = squarefree_part_q(self.coeffs)
        r = np.roots([float(x) for x in reversed(sf)])
        return np.abs(r)

    def roots_on_circle(self, tol=1e-6) -> bool:
        return bool(np.all(np.abs(self.root_moduli() - self.q ** 0.5) < tol))

    def n1(self):
        """#C(F_q) = q + 1 + c_{2g-1}."""
        return self.q + 1 + self.coeffs[-2]

    def __str__(self):
        return format_int_poly(self.coeffs)

    def factored(self) -> str:
        return factor_weil(self.coeffs, self.q)


def weil_from_power_sums(s, q=Q_BASE) -> WeilPoly:
    """Weil polynomial from s_1..s_g (power sums of the Frobenius eigenvalues)."""
    g = len(s)
    e = [Fraction(1)]
    for k in range(1, g + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i - 1]
        e.append(acc / k)
    if any(x.denominator != 1 for x in e):
        raise ArithmeticError("non-integral elementary symmetric function; inconsistent counts")
    c = [0] * (2 * g + 1)
    for i in range(g + 1):
        c[2 * g - i] = (-1) ** i * int(e[i])
    for i in range(g):
        c[i] = q ** (g - i) * c[2 * g - i]
    return WeilPoly(tuple(c), q)


def weil_from_counts(N, q=Q_BASE) -> WeilPoly:
    s = [q ** m + 1 - n for m, n in enumerate(N, start=1)]
    return weil_from_power_sums(s, q)


def weil_polynomial(F: MPoly, config: SingularConfig) -> WeilPoly:
    cv = count_vector(F, config)
    W = weil_from_counts(cv.N)
    if not W.satisfies_functional_equation():
        raise ArithmeticError("functional equation fails")
    return W


# --- integer polynomial helpers (presentation only) ---------------------------

def poly_mul_int(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_pow_int(a, k):
    out = [1]
    for _ in range(k):
        out = poly_mul_int(out, a)
    return out


def expand_factored(factors):
    """Product of (coefficient list lowest-first, exponent) pairs."""
    out = [1]
    for f, k in factors:
        out = poly_mul_int(out, poly_pow_int(list(f), k))
    return tuple(out)


def _divide_int(a, b):
    """Exact quotient a / b over Z (b monic), or None."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return None
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        q[i - db] = c
        for j in range(db + 1):
            a[i - db + j] -= c * b[j]
    if any(a[:db]):
        return None
    return q


def format_int_poly(c, var="t"):
    terms = []
    for i in range(len(c) - 1, -1, -1):
        a = c[i]
        if not a:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(a) == 1:
            s = mono
        elif mono:
            s = f"{abs(a)}{mono}"
        else:
            s = str(abs(a))
        terms.append(("-" if a < 0 else "+", s))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, s in terms[1:]:
        out += f" {sign} {s}"
    return out


def _qdivmod(a, b):
    a = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _qgcd(a, b):
    a, b = [Fraction(x) for x in a], [Fraction(x) for x in b]
    while b and any(b):
        _, r = _qdivmod(a, b)
        a, b = b, r
    return [x / a[-1] for x in a]


def squarefree_part_q(c):
    """c / gcd(c, c') over Q, monic."""
    d = [i * x for i, x in enumerate(c)][1:]
    g = _qgcd(c, d)
    q, r = _qdivmod(c, g)
    assert not any(r)
    return [x / q[-1] for x in q]


def _isqrt_poly(c):
    """Integer polynomial S with S^2 = c (monic), or None."""
    n = len(c) - 1
    if n % 2:
        return None
    m = n // 2
    s = [0] * (m + 1)
    s[m] = 1
    for k in range(m - 1, -1, -1):
        # coefficient of t^(m + k) in S^2 determines s[k]
        acc = sum(s[i] * s[m + k - i] for i in range(k + 1, m + 1))
        val = c[m + k] - acc
        if val % 2:
            return None
        s[k] = val // 2
    return s if poly_mul_int(s, s) == list(c) else None


def factor_weil(coeffs, q=Q_BASE) -> str:
    """Factored form over Z of a Weil polynomial (linear, quadratic and squared quartic pieces)."""
    rest = list(coeffs)
    r = int(round(q ** 0.5))
    found = []
    cands = [[r, 1], [-r, 1]] + [[q, a, 1] for a in range(-2 * r + 1, 2 * r)]
    for f in cands:
        k = 0
        while True:
            d = _divide_int(rest, f)
            if d is None:
                break
            rest, k = d, k + 1
        if k:
            found.append((f, k))
    if len(rest) > 1:
        s = _isqrt_poly(rest)
        if s is not None and len(s) > 1:
            found.append((s, 2))
        else:
            found.append((rest, 1))
    found.sort(key=lambda fk: (len(fk[0]), fk[0]))
    parts = []
    for f, k in found:
        body = format_int_poly(f)
        parts.append(f"({body})" + (f"^{k}" if k > 1 else ""))
    return "".join(parts) if parts else "1"


# --- geometric irreducibility ------------------------------------------------

def _forms_up_to_scalar(d: int):
    """Residue vectors of all nonzero degree-d ternary forms over GF(3), first nonzero entry 1."""
    n = len(monomials(3, d))
    total = 3 ** n
    idx = np.arange(total, dtype=np.int64)
    digits = np.zeros((total, n), dtype=np.int8)
    tmp = idx.copy()
    for i in range(n - 1, -1, -1):
        digits[:, i] = tmp % 3
        tmp //= 3
    nz = digits != 0
    first = np.argmax(nz, axis=1)
    keep = nz.any(axis=1) & (digits[np.arange(total), first] == 1)
    return digits[keep]


def _digit_table(d: int, e: int, pts):
    """(num monomials, num points * e) F3-digit table of monomial values over GF(3^e)."""
    E = get_field(e)
    X, Y, Z = pts
    rows = []
    for m in monomials(3, d):
        v = np.ones_like(X)
        for col, k in zip((X, Y, Z), m):
            if k:
                v = E.vmul(v, E.vpow(col, k))
        packed = E.val_to_pack[v]
        dig = np.zeros((X.shape[0], e), dtype=np.int8)
        for i in range(e):
            dig[:, i] = packed % 3
            packed = packed // 3
        rows.append(dig.reshape(-1))
    return np.array(rows, dtype=np.int16)


PREFILTER_DEGREE = 3


@lru_cache(maxsize=1)
def _divisor_tables():
    """Low-degree GF(3) forms with their zero sets on P^2(GF(27)) as packed bitmasks."""
    e = PREFILTER_DEGREE
    pts = _p2_points(e)
    npts = pts[0].shape[0]
    out = []
    for d in (1, 2, 3):
        forms = _forms_up_to_scalar(d)
        T = _digit_table(d, e, pts)
        masks = []
        for s in range(0, forms.shape[0], 4096):
            vals = (forms[s:s + 4096].astype(np.int16) @ T) % 3
            zero = (vals.reshape(vals.shape[0], npts, e) == 0).all(axis=2)
            masks.append(np.packbits(zero, axis=1))
        out.append((d, forms, np.concatenate(masks)))
    sextic_T = _digit_table(6, e, pts)
    return out, sextic_T, npts


def form_from_residues(vec, d: int) -> MPoly:
    F = get_field(1)
    return MPoly(F, 3, {m: F.from_int(int(c)) for m, c in zip(monomials(3, d), vec) if c})


def sextic_residues(F: MPoly):
    F3 = get_field(1)
    return np.array([F3.to_int(F.coeff(m)) for m in SEXTIC_MONOMIALS], dtype=np.int16)


def f3_factor_of_low_degree(F: MPoly):
    """A GF(3) factor of degree <= 3 of the sextic F, or None.

    Zero sets on P^2(GF(27)) prefilter the 29901 candidate divisors (a
    divisor's zero set lies inside the sextic's); survivors are confirmed by
    exact division.
    """
    tables, sextic_T, npts = _divisor_tables()
    vals = (sextic_residues(F) @ sextic_T) % 3
    zF = np.packbits((vals.reshape(npts, PREFILTER_DEGREE) == 0).all(axis=1))
    for d, forms, masks in tables:
        cand = np.nonzero(~((masks & ~zF).any(axis=1)))[0]
        for i in cand:
            g = form_from_residues(forms[i], d)
            if form_divides(g, F):
                return g
    return None


@dataclass
class IrreducibilityResult:
    irreducible: bool
    stage: int
    factor: MPoly | None = None
    count: int | None = None
    details: dict = field(default_factory=dict)


def irreducibility_report(F: MPoly) -> IrreducibilityResult:
    """Two-stage geometric irreducibility test for sextics over GF(3).

    Stage 1 trial-divides by GF(3) forms of degree <= 3.  Stage 2 uses the
    count over GF(3^6): an GF(3)-irreducible but geometrically reducible
    sextic splits into conjugate components of degree <= 3 and has at least
    1343 points there, above the bound 1270 for irreducible curves.
    """
    if F.field.degree != 1 or F.degree() != 6 or not F.is_homogeneous():
        raise ValueError("expects a sextic form over GF(3)")
    g = f3_factor_of_low_degree(F)
    if g is not None:
        return IrreducibilityResult(False, 1, factor=g)
    n = count_plane_curve(F, IRREDUCIBILITY_DEGREE)
    return IrreducibilityResult(n <= IRREDUCIBILITY_BOUND, 2, count=n)


def is_geometrically_irreducible(F: MPoly) -> bool:
    return irreducibility_report(F).irreducible


# --- slow oracle: factor over GF(3^6) by Hensel lifting -----------------------

def _bivariate_in_ty(G: MPoly, a: int):
    """h(t, y) = G(a + t, y, 1) as a list over y-degree of t-polynomials."""
    E = G.field
    rows = {}
    for (i, j, _k), c in G.terms.items():
        # (a + t)^i = sum binom(i, r) a^(i-r) t^r
        row = rows.setdefault(j, {})
        for r in range(i + 1):
            b = comb(i, r) % 3
            if b:
                v = E.mul(E.mul(c, E.from_int(b)), E.pow(a, i - r))
                row[r] = E.add(row.get(r, 0), v)
    n = max(rows, default=-1)
    out = []
    for j in range(n + 1):
        row = rows.get(j, {})
        m = max(row, default=-1)
        out.append(U.trim([row.get(r, 0) for r in range(m + 1)]))
    return out


def _truncate(p, prec):
    return U.trim(list(p[:prec]))


def _series_mul(E, a, b, prec):
    """Product of polynomials in y whose coefficients are t-polynomials mod t^prec."""
    if not a or not b:
        return []
    out = [[] for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = U.padd(E, out[i + j], _truncate(U.pmul(E, x, y), prec))
    return out


def _hensel_lift(E, h, factors, prec):
    """Lift monic factors of h(0, y) to factors of h(t, y) mod t^prec (h monic in y)."""
    r = len(factors)
    cof = []
    for i in range(r):
        other = [1]
        for j in range(r):
            if j != i:
                other = U.pmul(E, other, factors[j])
        g, s, _ = U.pxgcd(E, other, factors[i])
        if U.deg(g) != 0:
            raise ArithmeticError("factors are not coprime")
        cof.append(s)  # s * other = 1 mod factors[i]
    # lifted[i][k] = t^k coefficient (a polynomial in y) of factor i
    lifted = [[list(f)] for f in factors]
    for k in range(1, prec):
        # t^k coefficient of h - prod(lifted)
        prod = None
        for L in lifted:
            poly = _t_series_to_y_rows(L)
            prod = poly if prod is None else _series_mul(E, prod, poly, k + 1)
        err = []
        for j in range(max(len(h), len(prod))):
            hv = h[j][k] if j < len(h) and k < len(h[j]) else 0
            pv = prod[j][k] if j < len(prod) and k < len(prod[j]) else 0
            err.append(E.sub(hv, pv))
        err = U.trim(err)
        for i in range(r):
            corr = U.pmod(E, U.pmul(E, err, cof[i]), factors[i]) if err else []
            lifted[i].append(corr)
    return [_t_series_to_y_rows(L) for L in lifted]


def _t_series_to_y_rows(L):
    """[c_0(y), c_1(y), ...] (coefficients of t^k) to rows over y-degree of t-polynomials."""
    n = max((len(c) for c in L), default=0)
    rows = []
    for j in range(n):
        rows.append(U.trim([c[j] if j < len(c) else 0 for c in L]))
    return rows


def _total_degree(rows):
    return max((j + len(r) - 1 for j, r in enumerate(rows) if r), default=-1)


def _divides_ty(E, g, h):
    """Exact division test in E[t][y] for g monic in y."""
    rem = [list(r) for r in h]
    dg = len(g) - 1
    for j in range(len(rem) - 1, dg - 1, -1):
        c = U.trim(rem[j])
        if not c:
            continue
        for i, gi in enumerate(g):
            if gi:
                rem[j - dg + i] = U.psub(E, rem[j - dg + i], U.pmul(E, c, gi))
    return not any(U.trim(r) for r in rem)


def slow_irreducibility_oracle(F: MPoly, seed: int = 0, tries: int = 60) -> bool:
    """Geometric irreducibility of a sextic over GF(3), decided by factoring over GF(3^6).

    An GF(3)-irreducible sextic splits over the algebraic closure into
    conjugate components defined over GF(3^k) with k | 6, so irreducibility
    over GF(3^6) is equivalent to geometric irreducibility.  The test picks
    coordinates where F is monic in y, factors a squarefree fiber and
    Hensel-lifts; any subset of lifted factors of total degree <= 3 that
    divides exactly is a witness.  This shares no code with the count test.
    """
    E = get_field(IRREDUCIBILITY_DEGREE)
    G0 = F.embed(IRREDUCIBILITY_DEGREE)
    rng = random.Random(seed)
    misses = 0
    for _ in range(tries):
        M = [[E.random(rng) for _ in range(3)] for _ in range(3)]
        if not det3(E, *M):
            continue
        G = G0.linear_transform(M)
        lead = G.coeff((0, 6, 0))
        if not lead or G.is_zero():
            continue
        G = G.scale(E.inv(lead))
        for _ in range(40):
            a = E.random(rng)
            h = _bivariate_in_ty(G, a)
            h0 = [r[0] if r else 0 for r in h]
            if U.deg(h0) != 6 or U.deg(U.pgcd(E, h0, U.pderiv(E, h0))) > 0:
                continue
            facs = [f for f, _ in U.factor(E, h0, rng)]
            if len(facs) == 1:
                return True
            lifted = _hensel_lift(E, h, facs, 4)
            r = len(facs)
            for mask in range(1, 2 ** r - 1):
                idx = [i for i in range(r) if mask >> i & 1]
                if sum(len(facs[i]) - 1 for i in idx) > 3:
                    continue
                cand = [[1]]
                for i in idx:
                    cand = _series_mul(E, cand, lifted[i], 4)
                if _total_degree(cand) > 3:
                    continue
                if _divides_ty(E, cand, h):
                    return False
            return True
        # no squarefree fiber among 40 samples; the discriminant in y has
        # at most 30 roots, so F has a repeated factor or is inseparable in y
        misses += 1
        if misses >= 3:
            return False
    raise ArithmeticError("oracle found no coordinates with F(0, 1, 0) != 0")

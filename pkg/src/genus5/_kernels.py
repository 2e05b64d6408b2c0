"""Compiled fiber-counting kernel.

Field elements are stored Zech-log values (0 for zero, e + 1 for g^e),
exactly as in :mod:`genus5.field_tower`.  For every x0 in GF(q) the kernel
counts the distinct roots of f(x0, y) as deg gcd(y^q - y, f(x0, y)),
with y^q obtained by repeated coefficient-wise cubing modulo f.
"""
from __future__ import annotations

import os

os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

import numpy as np
from numba import njit, prange

MAXD = 24  # scratch length; degrees in y never exceed 6, cubes of residues stay below 18


@njit(cache=True, inline="always")
def _add(a, b, zech, n):
    if a == 0:
        return b
    if b == 0:
        return a
    z = zech[(b - a) % n]
    if z == 0:
        return 0
    return (a + z - 2) % n + 1


@njit(cache=True, inline="always")
def _mul(a, b, n):
    if a == 0 or b == 0:
        return 0
    return (a + b - 2) % n + 1


@njit(cache=True, inline="always")
def _neg(a, half, n):
    if a == 0:
        return 0
    return (a - 1 + half) % n + 1


@njit(cache=True, inline="always")
def _inv(a, n):
    return (1 - a) % n + 1


@njit(cache=True)
def _degree(p, upto):
    for i in range(upto, -1, -1):
        if p[i] != 0:
            return i
    return -1


@njit(cache=True)
def _reduce(r, dr, f, df, zech, half, n):
    """r <- r mod f (f monic of degree df); returns the new degree bound."""
    for i in range(dr, df - 1, -1):
        c = r[i]
        if c != 0:
            nc = _neg(c, half, n)
            for j in range(df):
                if f[j] != 0:
                    r[i - df + j] = _add(r[i - df + j], _mul(nc, f[j], n), zech, n)
            r[i] = 0
    return min(dr, df - 1)


@njit(cache=True)
def _gcd_degree(a, da, b, db, zech, half, n):
    """Degree of gcd(a, b); both arrays are destroyed."""
    da = _degree(a, da)
    db = _degree(b, db)
    while db >= 0:
        # a <- a mod b
        inv = _inv(b[db], n)
        for i in range(da, db - 1, -1):
            c = a[i]
            if c != 0:
                t = _neg(_mul(c, inv, n), half, n)
                for j in range(db + 1):
                    if b[j] != 0:
                        a[i - db + j] = _add(a[i - db + j], _mul(t, b[j], n), zech, n)
        da = _degree(a, min(da, db - 1)) if db > 0 else -1
        # swap
        for i in range(MAXD):
            tmp = a[i]
            a[i] = b[i]
            b[i] = tmp
        tmp = da
        da = db
        db = tmp
    return da


@njit(cache=True)
def _fiber_roots(c, dc, e, zech, half, n, q):
    """Distinct roots in GF(3^e) of the polynomial with coefficients c[0..dc]."""
    d = _degree(c, dc)
    if d < 0:
        return q
    if d == 0:
        return 0
    if d == 1:
        return 1
    f = np.zeros(MAXD, dtype=np.int64)
    inv = _inv(c[d], n)
    for i in range(d + 1):
        f[i] = _mul(c[i], inv, n)
    r = np.zeros(MAXD, dtype=np.int64)
    r[1] = 1
    t = np.zeros(MAXD, dtype=np.int64)
    dr = 1
    for _ in range(e):
        for i in range(MAXD):
            t[i] = 0
        for i in range(dr + 1):
            a = r[i]
            if a != 0:
                t[3 * i] = ((a - 1) * 3) % n + 1
        dr = _reduce(t, 3 * dr, f, d, zech, half, n)
        for i in range(MAXD):
            r[i] = t[i]
    # r <- r - y
    r[1] = _add(r[1], _neg(1, half, n), zech, n)
    if dr < 1:
        dr = 1
    return _gcd_degree(f, d, r, dr, zech, half, n)


@njit(cache=True, parallel=True)
def count_affine(term_a, term_b, term_v, e, zech, half, n, q):
    """#{(x0, y0) in GF(q)^2 : sum v x0^a y0^b = 0} (q = 3^e)."""
    total = 0
    nterms = term_a.shape[0]
    for x0 in prange(q):
        c = np.zeros(MAXD, dtype=np.int64)
        dc = 0
        for t in range(nterms):
            a = term_a[t]
            b = term_b[t]
            v = term_v[t]
            if a == 0:
                xa = 1
            elif x0 == 0:
                xa = 0
            else:
                xa = ((x0 - 1) * a) % n + 1
            c[b] = _add(c[b], _mul(v, xa, n), zech, n)
            if b > dc:
                dc = b
        total += _fiber_roots(c, dc, e, zech, half, n, q)
    return total


@njit(cache=True)
def count_roots_kernel(c, e, zech, half, n, q):
    return _fiber_roots(c.copy(), c.shape[0] - 1, e, zech, half, n, q)


def warmup():
    """Trigger compilation on a tiny input."""
    z = np.array([0, 0], dtype=np.int64)
    count_affine(np.array([1], dtype=np.int64), np.array([0], dtype=np.int64),
                 np.array([1], dtype=np.int64), 1, z, 1, 2, 3)

"""Row reduction and null spaces over GF(3^k), with descent to GF(3).

A Frobenius-stable linear system over an extension has a reduced echelon
form whose entries already lie in the prime field.  The descent here
simply row-reduces over the extension, checks that claim entry by entry,
and reads the null space off over GF(3).
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .field_tower import get_field, restrict_value


class DescentError(ArithmeticError):
    """The echelon form has an entry outside GF(3); the system was not Frobenius-stable."""


@dataclass(frozen=True)
class Matrix:
    field_degree: int
    rows: tuple

    @classmethod
    def from_rows(cls, field_degree, rows):
        rows = tuple(tuple(r) for r in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        return cls(field_degree, rows)

    @property
    def shape(self):
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @property
    def field(self):
        return get_field(self.field_degree)

    def frobenius(self, times=1):
        F = self.field
        return Matrix(self.field_degree, tuple(tuple(F.frob(a, times) for a in r) for r in self.rows))


def _rref(F, rows, ncols):
    """In-place reduced row echelon form of a list of lists; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = F.inv(rows[r][c])
        if inv != 1:
            rows[r] = [F.mul(a, inv) for a in rows[r]]
        piv = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = F.neg(rows[i][c])
                rows[i] = [F.add(a, F.mul(f, b)) if b else a for a, b in zip(rows[i], piv)]
        pivots.append(c)
        r += 1
    del rows[r:]
    return pivots


def reduced_echelon(M: Matrix) -> Matrix:
    """Reduced row echelon form (zero rows dropped)."""
    rows = [list(r) for r in M.rows]
    _rref(M.field, rows, M.shape[1])
    return Matrix(M.field_degree, tuple(tuple(r) for r in rows))


def rank(M: Matrix) -> int:
    return len(reduced_echelon(M).rows)


def nullspace(M: Matrix, ncols: int | None = None):
    """Basis of {v : M v = 0} over the field of M, in reduced echelon form."""
    F = M.field
    n = M.shape[1] if M.rows else ncols
    rows = [list(r) for r in M.rows]
    pivots = _rref(F, rows, n)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, c in zip(rows, pivots):
            v[c] = F.neg(r[f])
        basis.append(v)
    _rref(F, basis, n)
    return basis


@dataclass(frozen=True)
class NullBasis:
    """GF(3)-rational basis of a null space (residues 0,1,2), reduced echelon, pivots ascending."""

    vectors: tuple

    @property
    def dim(self):
        return len(self.vectors)

    @property
    def length(self):
        return len(self.vectors[0]) if self.vectors else 0

    def as_array(self) -> np.ndarray:
        return np.array(self.vectors, dtype=np.int64).reshape(self.dim, -1)

    def combine(self, v):
        """Coefficient vector sum v_j b_j mod 3."""
        return tuple(int(x) for x in (np.asarray(v, dtype=np.int64) @ self.as_array()) % 3)

    def to_table(self) -> str:
        return "\n".join("".join(str(d) for d in row) for row in self.vectors)

    @classmethod
    def from_table(cls, text: str):
        return cls(tuple(tuple(int(ch) for ch in line.strip()) for line in text.splitlines() if line.strip()))

    def digest(self) -> str:
        return hashlib.sha256(self.to_table().encode()).hexdigest()[:16]


def galois_descent_nullspace(M: Matrix, ncols: int = 28) -> NullBasis:
    """Null space of a Frobenius-stable system over GF(3^k), returned over GF(3).

    Raises :class:`DescentError` if the echelon form leaves GF(3).
    """
    F = M.field
    rows = [list(r) for r in M.rows]
    n = M.shape[1] if M.rows else ncols
    _rref(F, rows, n)
    for r in rows:
        for a in r:
            if a and not F.in_subfield(a, 1):
                raise DescentError(f"echelon entry {F.format(a)} is not in GF(3); "
                                   "the point set is not Frobenius-stable")
    k = M.field_degree
    F3 = get_field(1)
    rows3 = [[restrict_value(a, k, 1) for a in r] for r in rows]
    M3 = Matrix(1, tuple(tuple(r) for r in rows3)) if rows3 else Matrix(1, ())
    basis = nullspace(M3, n) if rows3 else [[int(i == j) for j in range(n)] for i in range(n)]
    vecs = tuple(tuple(F3.to_int(a) for a in v) for v in basis)
    return NullBasis(vecs)


def check_nullbasis(M: Matrix, B: NullBasis) -> bool:
    """Every basis vector, embedded into the field of M, annihilates every row."""
    F = M.field
    for v in B.vectors:
        ve = [F.from_int(x) for x in v]
        for r in M.rows:
            acc = 0
            for a, b in zip(r, ve):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            if acc:
                return False
    return True


def intersect_affine(B: NullBasis, constraints):
    """Solutions c = sum v_j b_j (v over GF(3)) with prescribed coordinates.

    ``constraints`` maps coordinate index -> residue.  Returns (particular
    coefficient vector, NullBasis of the homogeneous part) or None if the
    affine subspace is empty.  Both live in the 28-coordinate space.
    """
    A = B.as_array()
    idx = list(constraints)
    d = B.dim
    # solve v @ A[:, idx] = target over GF(3)
    F = get_field(1)
    rows = [[F.from_int(int(A[j, i])) for j in range(d)] + [F.from_int(constraints[i])] for i in idx]
    piv = _rref(F, rows, d + 1)
    if d in piv:
        return None
    v = [0] * d
    for r, c in zip(rows, piv):
        v[c] = r[d]
    particular = tuple(int(x) for x in (np.array([F.to_int(a) for a in v]) @ A) % 3)
    hom_rows = [r[:d] for r in rows]
    sub = nullspace(Matrix(1, tuple(tuple(r) for r in hom_rows)), d) if hom_rows else \
        [[int(i == j) for j in range(d)] for i in range(d)]
    vecs = [tuple(int(x) for x in (np.array([F.to_int(a) for a in s]) @ A) % 3) for s in sub]
    # re-echelon in coefficient space
    rows28 = [[F.from_int(x) for x in vv] for vv in vecs]
    _rref(F, rows28, A.shape[1])
    hom = NullBasis(tuple(tuple(F.to_int(a) for a in r) for r in rows28))
    return particular, hom

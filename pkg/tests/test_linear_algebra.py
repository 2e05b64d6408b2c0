import random

import numpy as np
import pytest

from genus5.enumeration import build_system
from genus5.field_tower import get_field
from genus5.linear_algebra import (DescentError, Matrix, NullBasis, check_nullbasis,
                                   galois_descent_nullspace, intersect_affine, nullspace, rank,
                                   reduced_echelon)
from genus5.polynomials.forms import parse_point
from genus5.singularity import SingularConfig


def rand_matrix(k, r, c, rng):
    F = get_field(k)
    return Matrix.from_rows(k, [[F.random(rng) for _ in range(c)] for _ in range(r)])


@pytest.mark.parametrize("k", [1, 2, 4])
def test_rank_nullity(k):
    rng = random.Random(k)
    F = get_field(k)
    for _ in range(20):
        r, c = rng.randint(1, 8), rng.randint(1, 10)
        M = rand_matrix(k, r, c, rng)
        basis = nullspace(M)
        assert rank(M) + len(basis) == c
        for v in basis:
            for row in M.rows:
                acc = 0
                for a, b in zip(row, v):
                    acc = F.add(acc, F.mul(a, b))
                assert acc == 0


def test_reduced_echelon_is_idempotent():
    rng = random.Random(1)
    M = rand_matrix(2, 5, 7, rng)
    R = reduced_echelon(M)
    assert reduced_echelon(R).rows == R.rows


def test_descent_on_frobenius_stable_system():
    cfg = SingularConfig.from_orbits("I", [parse_point(p) for p in
                                           ("(0:0:1)", "(0:1:0)", "(1:0:0)", "(1:zeta2^2:zeta2^2)")])
    M = build_system(cfg)
    assert M.field_degree == 2
    B = galois_descent_nullspace(M)
    assert B.dim == 13 and B.length == 28
    assert check_nullbasis(M, B)
    # the GF(9)-null space has the same dimension
    assert len(nullspace(M)) == 13


def test_descent_rejects_unstable_systems():
    P = parse_point("(1:zeta2^1:0)")
    cfg = SingularConfig("I", ((P, 2),), (1,), "half an orbit")
    with pytest.raises(DescentError):
        galois_descent_nullspace(build_system(cfg))


def test_nullbasis_table_roundtrip():
    B = NullBasis(((1, 0, 2), (0, 1, 1)))
    assert NullBasis.from_table(B.to_table()) == B
    assert B.combine([1, 1]) == (1, 1, 0)
    assert len(B.digest()) == 16


def test_intersect_affine():
    rng = random.Random(3)
    vecs = [tuple(rng.randrange(3) for _ in range(28)) for _ in range(6)]
    B = galois_descent_nullspace(Matrix.from_rows(1, [list(v) for v in vecs]))  # 22-dim
    res = intersect_affine(B, {0: 1, 5: 2, 9: 0})
    assert res is not None
    part, hom = res
    assert (part[0], part[5], part[9]) == (1, 2, 0)
    assert hom.dim == B.dim - 3
    A = hom.as_array()
    assert not A[:, [0, 5, 9]].any()
    # every point of the affine space lies in the original span
    span = np.vstack([B.as_array(), np.array(part)])
    F = get_field(1)
    M = Matrix.from_rows(1, [[F.from_int(int(x)) for x in r] for r in span])
    assert rank(M) == B.dim


def test_intersect_affine_inconsistent():
    B = NullBasis(((1, 1, 0), (0, 0, 1)))
    assert intersect_affine(B, {0: 1, 1: 2}) is None

import random

import pytest

from genus5.field_tower import get_field
from genus5.polynomials.forms import VARS5, MPoly
from genus5.sextic_model import (DegenerateDetA, NotVanishingAtPQ, QuadricTriple, build_sextic,
                                 change_basis, count_p4_naive, count_p4_points, decompose, det3_field,
                                 random_invertible, random_linear, random_triple, recompose, shear,
                                 shear_invariance_check, swap_marked_points)


def triples(rng, n, k=1):
    out = []
    while len(out) < n:
        T = random_triple(rng, k)
        try:
            build_sextic(T)
        except DegenerateDetA:
            continue
        out.append(T)
    return out


def test_decompose_recompose():
    rng = random.Random(1)
    for T in triples(rng, 10):
        for phi in T.phis:
            assert recompose(decompose(phi)) == phi


def test_decompose_requires_marked_points():
    E = get_field(1)
    phi = MPoly(E, 5, {(2, 0, 0, 0, 0): 1, (0, 1, 1, 0, 0): 1}, VARS5)
    with pytest.raises(NotVanishingAtPQ):
        decompose(phi)


def test_sextic_is_homogeneous_of_degree_six():
    rng = random.Random(2)
    for T in triples(rng, 10):
        S = build_sextic(T)
        assert S.is_homogeneous() and S.degree() == 6


def test_parse_triple():
    T = QuadricTriple.parse(["x0*x4 + x1^2", "x0*x1 + x2*x4 + x3^2", "x0*x2 + x3*x4 + x1*x2"])
    S = build_sextic(T)
    assert S.degree() == 6


def test_basis_change_scales_by_det_squared():
    rng = random.Random(3)
    F = get_field(1)
    for T in triples(rng, 30):
        B = random_invertible(rng)
        d = det3_field(F, B)
        assert build_sextic(change_basis(T, B)) == build_sextic(T).scale(F.mul(d, d))


def test_swap_and_shear_are_projective_invariants():
    rng = random.Random(4)
    for T in triples(rng, 30):
        S = build_sextic(T)
        assert S.projectively_equal(build_sextic(swap_marked_points(T)))
        assert shear_invariance_check(T, random_linear(rng), random_linear(rng))


def test_shear_over_extension():
    rng = random.Random(5)
    T = triples(rng, 1)[0]
    phi, psi = random_linear(rng, 2), random_linear(rng, 2)
    assert shear(T, phi, psi).field.degree == 2
    assert shear_invariance_check(T, phi, psi)


def test_p4_count_against_naive_scan():
    rng = random.Random(6)
    for T in triples(rng, 5):
        assert count_p4_points(T, 1) == count_p4_naive(T, 1)
    T = triples(rng, 1)[0]
    assert count_p4_points(T, 2) == count_p4_naive(T, 2)

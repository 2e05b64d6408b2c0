import random

import pytest

from genus5.fixtures import reference_curves, theorem_weil_classes
from genus5.point_counting import (IRREDUCIBILITY_BOUND, CountVector, WeilBoundViolation, WeilPoly,
                                   count_line_at_infinity, count_plane_curve, count_plane_curve_scan,
                                   count_smooth_model, count_vector, expand_factored, f3_factor_of_low_degree,
                                   factor_weil, irreducibility_report, poly_mul_int, slow_irreducibility_oracle,
                                   squarefree_part_q, weil_from_counts, weil_polynomial)
from genus5.polynomials.forms import form_divides, parse_poly

from conftest import norm_to_f3, rand_form, rand_sextic


def test_plane_count_matches_scan_small():
    rng = random.Random(1)
    for _ in range(10):
        F = rand_sextic(rng, density=rng.choice([0.2, 0.5, 1.0]))
        for e in (1, 2):
            assert count_plane_curve(F, e) == count_plane_curve_scan(F, e)


def test_plane_count_for_forms_over_gf9():
    rng = random.Random(2)
    for _ in range(5):
        F = rand_form(2, 6, rng, density=0.5)
        if F:
            assert count_plane_curve(F, 2) == count_plane_curve_scan(F, 2)
            assert count_plane_curve(F, 4) == count_plane_curve_scan(F, 4)
    with pytest.raises(ValueError):
        count_plane_curve(rand_form(2, 6, rng), 3)


def test_degenerate_forms():
    F = parse_poly("z^6")
    assert count_plane_curve(F, 2) == 9 + 1  # the line z = 0
    G = parse_poly("x^6")
    assert count_line_at_infinity(G, 1) == 1  # (0:1:0)
    assert count_plane_curve(G, 1) == 4


def test_weil_from_counts_roundtrip():
    for cls in theorem_weil_classes():
        W = WeilPoly(tuple(cls))
        assert W.satisfies_functional_equation() and W.roots_on_circle()
        # counts from the polynomial: N_m = q^m + 1 - s_m via Newton's identities
        c = W.coeffs
        e = [(-1) ** i * c[10 - i] for i in range(11)]
        s = []
        for k in range(1, 6):
            acc = k * e[k] - sum((-1) ** (i - 1) * e[k - i] * s[i - 1] for i in range(1, k))
            s.append((-1) ** (k - 1) * acc)
        N = [9 ** m + 1 - s[m - 1] for m in range(1, 6)]
        assert weil_from_counts(N).coeffs == c


def test_inconsistent_counts_are_rejected():
    with pytest.raises(ArithmeticError):
        weil_from_counts([40, 1, 1, 1, 1])
    with pytest.raises(WeilBoundViolation):
        CountVector((200, 81, 729, 6561, 59049))


def test_factor_weil_formats_known_classes():
    c = expand_factored([((9, 2, 1), 1), ((9, 5, 1), 4)])
    assert factor_weil(c) == "(t^2 + 2t + 9)(t^2 + 5t + 9)^4"
    assert squarefree_part_q(list(c)) == poly_mul_int([9, 2, 1], [9, 5, 1])


def test_circle_check_rejects_off_circle_roots():
    W = WeilPoly(tuple(expand_factored([((9, 10, 1), 1)])), 9)  # t^2 + 10t + 9 = (t+1)(t+9)
    assert not W.roots_on_circle()


@pytest.mark.parametrize("curve", reference_curves(), ids=lambda c: c.name)
def test_gf3_and_gf9_weil_polynomials_are_consistent(curve):
    """P_3(t) P_3(-t) = P_9(t^2), where P_3 comes from counts over GF(3^e), e <= 5."""
    N3 = [count_smooth_model(curve.form, curve.config, e) for e in range(1, 6)]
    P3 = weil_from_counts(N3, q=3)
    neg = [x * (-1) ** i for i, x in enumerate(P3.coeffs)]
    prod = poly_mul_int(list(P3.coeffs), neg)
    assert all(x == 0 for x in prod[1::2])
    assert tuple(prod[0::2]) == weil_polynomial(curve.form, curve.config).coeffs


def test_count_vector_records_plane_counts():
    curve = reference_curves()[0]
    cv = count_vector(curve.form, curve.config, max_m=2)
    assert cv.N[0] == 32 and len(cv.plane) == 2
    assert cv.plane[0] == count_plane_curve(curve.form, 2)


# --- irreducibility ---------------------------------------------------------------

def test_low_degree_factor_found():
    rng = random.Random(4)
    for d in (1, 2, 3):
        for _ in range(5):
            g, h = rand_form(1, d, rng), rand_form(1, 6 - d, rng)
            if not g or not h:
                continue
            F = g * h
            fac = f3_factor_of_low_degree(F)
            assert fac is not None and form_divides(fac, F)
            r = irreducibility_report(F)
            assert not r.irreducible and r.stage == 1


@pytest.mark.parametrize("k,d", [(2, 3), (3, 2), (6, 1), (2, 1), (2, 2)])
def test_norms_are_caught(k, d):
    rng = random.Random(k * 10 + d)
    hits = 0
    for _ in range(4):
        F = norm_to_f3(rand_form(k, d, rng))
        if F.degree() < 6:
            F = F * rand_form(1, 6 - F.degree(), rng)
        if not F:
            continue
        r = irreducibility_report(F)
        assert not r.irreducible
        if r.stage == 2:
            assert r.count > IRREDUCIBILITY_BOUND
        assert not slow_irreducibility_oracle(F)
        hits += 1
    assert hits


@pytest.mark.parametrize("curve", reference_curves(), ids=lambda c: c.name)
def test_reference_curves_are_irreducible(curve):
    r = irreducibility_report(curve.form)
    assert r.irreducible and r.count <= IRREDUCIBILITY_BOUND
    assert slow_irreducibility_oracle(curve.form)


def test_oracle_on_repeated_factors():
    F = parse_poly("x^3 + y^3 + x*y*z")
    assert not slow_irreducibility_oracle(F * F)
    assert not irreducibility_report(F * F).irreducible
    assert not slow_irreducibility_oracle(parse_poly("x^6 + y^6"))


def test_irreducibility_needs_a_gf3_sextic():
    with pytest.raises(ValueError):
        irreducibility_report(rand_form(2, 6, random.Random(0)))
    with pytest.raises(ValueError):
        irreducibility_report(parse_poly("x^5 + y^5"))

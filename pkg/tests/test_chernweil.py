from fractions import Fraction

import pytest

from nerveforms.algebra import AlgebraElement, MatrixElement, differentiate, dt, theta
from nerveforms.catalog import c1_power, ch3_components, ch3_cs_components, euler_cs_components
from nerveforms.chernweil import (
    InvariantPoly,
    bss_cochain,
    bss_cochain_ng,
    bss_generate,
    canonical_connection,
    ch_cocycle_thm36,
    ch_cocycle_total,
    cs_cochain,
    cs_transgress,
    curvature,
    integrate_prism,
    split_by_dt,
    theta_diff,
)
from nerveforms.matrices import FormMatrix, mat_mul
from nerveforms.scalars import Scalar
from nerveforms.simplicial import PG, Cochain, right_invariance_check, total_D
from nerveforms.textio import parse

TH = [MatrixElement.word([theta(i)]) for i in range(4)]
MINUS_INV_2PI_I = -Scalar.two_pi_i(-1)


def t(i, p):
    return AlgebraElement.t(i, p)


def test_connection_at_level_zero():
    assert canonical_connection(0) == TH[0]


def test_connection_at_level_one():
    assert canonical_connection(1) == t(0, 1) * TH[0] + t(1, 1) * TH[1]


def test_connection_at_level_two_has_three_slots():
    th = canonical_connection(2)
    assert th == t(0, 2) * TH[0] + t(1, 2) * TH[1] + t(2, 2) * TH[2]


@pytest.mark.parametrize("form", ["gl", "so4"])
def test_curvature_vanishes_at_level_zero(form):
    om = curvature(0, form)
    if isinstance(om, FormMatrix):
        assert all(not om[a, b] for a in range(4) for b in range(4))
    else:
        assert om.is_zero()


def test_curvature_at_level_one():
    diff = theta_diff(0, 1)
    expected = -dt(1) * diff - t(0, 1) * t(1, 1) * diff * diff
    assert curvature(1) == expected


@pytest.mark.parametrize("p", [1, 2])
def test_bianchi_identity(p):
    th, om = canonical_connection(p), curvature(p)
    assert (differentiate(om) + th * om - om * th).is_zero()


def test_bianchi_identity_so4():
    th, om = canonical_connection(1, "so4"), curvature(1, "so4")
    total = om.d() + mat_mul(th, om) - mat_mul(om, th)
    assert all(not total[a, b] for a in range(4) for b in range(4))


def test_split_by_dt():
    parts = split_by_dt(curvature(1))
    assert set(parts) == {0, 1}
    assert parts[1] == -dt(1) * theta_diff(0, 1)


def test_integrate_prism_at_level_zero_is_identity():
    x = parse("tr(th0*th0*th0)")
    assert integrate_prism(x, 0) == x


def test_integrate_prism_linear_weight():
    w = parse("tr(th0*th1)")
    assert integrate_prism(t(1, 1) * dt(1) * w, 1) == Fraction(1, 2) * w


def test_integrate_prism_drops_lower_dt_terms():
    assert integrate_prism(parse("t1^2*tr(th0*th1)"), 1).is_zero()


def test_chern_class_newton_identities():
    u = MINUS_INV_2PI_I
    c2 = dict((ks, c) for c, ks in InvariantPoly.chern_class(2).terms)
    assert c2 == {(1, 1): Scalar(Fraction(1, 2)) * u ** 2, (2,): Scalar(Fraction(-1, 2)) * u ** 2}
    c3 = dict((ks, c) for c, ks in InvariantPoly.chern_class(3).terms)
    assert c3 == {
        (1, 1, 1): Scalar(Fraction(1, 6)) * u ** 3,
        (2, 1): Scalar(Fraction(-1, 2)) * u ** 3,
        (3,): Scalar(Fraction(1, 3)) * u ** 3,
    }


def test_first_chern_class_is_first_character():
    assert InvariantPoly.chern_class(1).terms == InvariantPoly.ch(1).terms


def test_inhomogeneous_polynomial_rejected():
    with pytest.raises(ValueError):
        InvariantPoly("trace", ((Scalar.one(), (1,)), (Scalar.one(), (2,))))


def test_bss_first_chern_character():
    expected = parse("(2*pi*I)^-1*(tr(th0) - tr(th1))")
    assert bss_generate(InvariantPoly.ch(1), 1) == expected


def test_bss_first_chern_character_on_the_nerve():
    assert bss_cochain_ng(InvariantPoly.ch(1))[1] == c1_power(1)


def test_bss_square_of_first_character_on_the_nerve():
    P = InvariantPoly.ch(1) * InvariantPoly.ch(1)
    assert bss_cochain_ng(P)[2] == c1_power(2)


@pytest.mark.parametrize(
    "P",
    [InvariantPoly.ch(1), InvariantPoly.ch(2), InvariantPoly.ch(3), InvariantPoly.chern_class(2),
     InvariantPoly.ch(1) * InvariantPoly.ch(1), InvariantPoly.pf()],
    ids=lambda P: P.name,
)
def test_bss_cocycle_is_closed(P):
    assert total_D(bss_cochain(P)).is_zero()


@pytest.mark.parametrize(
    "P, p",
    [(InvariantPoly.ch(1), 1), (InvariantPoly.ch(2), 1), (InvariantPoly.ch(2), 2),
     (InvariantPoly.ch(3), 2), (InvariantPoly.pf(), 1), (InvariantPoly.pf(), 2)],
)
def test_bss_components_are_right_invariant(P, p):
    assert right_invariance_check(bss_generate(P, p))


@pytest.mark.parametrize(
    "P", [InvariantPoly.ch(1), InvariantPoly.ch(2), InvariantPoly.ch(3), InvariantPoly.pf()],
    ids=lambda P: P.name,
)
def test_transgression_bounds_cocycle(P):
    assert total_D(cs_cochain(P)) == bss_cochain(P)


@pytest.mark.parametrize("p", [0, 1])
def test_euler_transgression_coefficients(p):
    assert cs_transgress(InvariantPoly.pf(), p) == euler_cs_components()[p]


def test_ch3_transgression_matches_closed_form():
    for p, x in ch3_cs_components().items():
        assert cs_transgress(InvariantPoly.ch(3), p) == x


@pytest.mark.parametrize("q, level", [(2, 1), (1, 2), (0, 3)])
def test_combinatorial_third_character(q, level):
    assert ch_cocycle_thm36(3, q) == ch3_components()[level]


def test_combinatorial_first_character():
    assert ch_cocycle_thm36(1, 0) == parse("(2*pi*I)^-1*(tr(th0) - tr(th1))")


def test_combinatorial_rejects_bad_q():
    with pytest.raises(ValueError):
        ch_cocycle_thm36(2, 2)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_combinatorial_totals_are_closed(p):
    assert total_D(ch_cocycle_total(p)).is_zero()


@pytest.mark.parametrize("p", [1, 2, 3])
def test_combinatorial_totals_match_integrated_curvature(p):
    assert ch_cocycle_total(p) == bss_cochain(InvariantPoly.ch(p))


def test_interior_slot_convention_misses_a_component():
    assert ch_cocycle_thm36(3, 1, slots="interior") != ch3_components()[2]


def test_pfaffian_cocycle_lives_on_pg():
    with pytest.raises(ValueError):
        bss_cochain_ng(InvariantPoly.pf())


def test_euler_cocycle_level_zero_vanishes():
    assert bss_generate(InvariantPoly.pf(), 0).is_zero()
    assert isinstance(bss_cochain(InvariantPoly.pf()), Cochain)
    assert bss_cochain(InvariantPoly.pf()).space == PG

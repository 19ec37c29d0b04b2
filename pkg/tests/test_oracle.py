import cmath
from fractions import Fraction

import numpy as np
import pytest

from nerveforms.algebra import MatrixElement, dt, substitute, theta
from nerveforms.catalog import COEFFICIENTS, ch3_components
from nerveforms.chernweil import ch_cocycle_thm36
from nerveforms.oracle import (
    EvalContext,
    FaceContext,
    GammaContext,
    SectionContext,
    eval_cup,
    eval_d_prime,
    eval_form,
    random_identity_check,
)
from nerveforms.simplicial import NG, PG, FaceSpec, cup, d_prime, face_pullback, gamma_map, section_map
from nerveforms.textio import parse


class CircleContext:
    """``h1 = exp(i phi)`` on U(1) with tangent ``i exp(i phi)``."""

    n, k = 1, 1

    def __init__(self, phi):
        self.h = np.array([[cmath.exp(1j * phi)]])

    def point(self, fam, idx):
        return self.h

    def tangent(self, fam, idx):
        return (1j * self.h)[None, :, :]


@pytest.mark.parametrize("phi", [0.0, 0.7, 2.5])
def test_circle_maurer_cartan(phi):
    value = eval_form(parse("tr(inv(h1)*d(h1))"), CircleContext(phi))
    assert value == pytest.approx(1j, abs=1e-14)


def test_odd_square_trace_vanishes_numerically():
    ctx = EvalContext(3, 2, seed=1)
    W = eval_form(MatrixElement.word([theta(0), theta(0)]), ctx)
    assert abs(np.trace(W)) < 1e-12
    assert np.abs(W).max() > 1e-3


def test_inner_face_cross_check():
    x = face_pullback(parse("tr(inv(h1)*d(h1))"), FaceSpec(NG, 2, 1))
    rhs = parse("tr(inv(h1)*d(h1)) + tr(inv(h2)*d(h2))")
    rep = random_identity_check(x, rhs, trials=20, tol=1e-9, n=2)
    assert rep.passed


def test_identical_sides_give_zero_residual():
    x = parse("tr(th0*th1*th2)")
    rep = random_identity_check(x, x, n=2)
    assert rep.passed
    assert "max residual 0.00e+00" in rep.entries[0].note


def test_wrong_identity_fails():
    rep = random_identity_check(parse("tr(th0*th1)"), parse("-tr(th0*th1)"), n=2)
    assert not rep.passed


def test_fifth_power_trace_degenerates_at_size_two():
    x = parse("tr(th0^5)")
    values = [eval_form(x, EvalContext(2, 5, seed=s)) for s in range(5)]
    assert max(abs(v) for v in values) < 1e-10
    assert abs(eval_form(x, EvalContext(3, 5, seed=0))) > 1e-3


def test_perturbed_coefficient_detected_at_size_three(monkeypatch):
    monkeypatch.setitem(COEFFICIENTS, "C15", Fraction(1, 9))
    mutated = ch3_components()[1]
    generated = ch_cocycle_thm36(3, 2)
    assert mutated != generated
    assert not random_identity_check(generated, mutated, n=3).passed


def test_linearity():
    x, y = parse("tr(th0*th1*inv(g2)*d(g2))"), parse("tr(th1^3)")
    ctx = EvalContext(3, 3, seed=4)
    combined = parse("5/2*tr(th0*th1*inv(g2)*d(g2)) - 5/4*tr(th1^3)")
    assert eval_form(combined, ctx) == pytest.approx(2.5 * eval_form(x, ctx) - 1.25 * eval_form(y, ctx))


def test_alternating_in_tangents():
    x = parse("tr(th0*th1*d(g2)*inv(g2))")
    ctx = EvalContext(2, 3, seed=5)
    base = eval_form(x, ctx, tangents=[0, 1, 2])
    assert eval_form(x, ctx, tangents=[1, 0, 2]) == pytest.approx(-base)
    assert eval_form(x, ctx, tangents=[1, 2, 0]) == pytest.approx(base)


def test_tangent_count_must_match_degree():
    with pytest.raises(ValueError):
        eval_form(parse("tr(th0*th1)"), EvalContext(2, 3, seed=0))


def test_prism_forms_rejected():
    with pytest.raises(ValueError):
        eval_form(dt(1) * parse("tr(th0*th1)"), EvalContext(2, 3, seed=0))


def test_points_are_well_conditioned():
    ctx = EvalContext(3, 1, seed=9)
    for i in range(10):
        g = ctx.point("g", i)
        assert abs(np.linalg.det(g)) > 1e-6
        assert np.linalg.cond(g) < 1e3


def test_face_context_index_checked():
    with pytest.raises(IndexError):
        FaceContext(EvalContext(2, 1, seed=0), PG, 1, 2)


def test_numeric_face_sum_matches_symbolic():
    x = parse("tr(th0*th1*th1)")
    ctx = EvalContext(3, 3, seed=2)
    assert eval_d_prime(x, PG, 1, ctx) == pytest.approx(eval_form(d_prime(x, PG, 1), ctx))


def test_numeric_cup_matches_symbolic():
    c1 = parse("tr(inv(h1)*d(h1))").with_meta(1, NG)
    ctx = EvalContext(2, 2, seed=3)
    assert eval_cup(c1, 1, c1, 1, ctx) == pytest.approx(eval_form(cup(c1, 1, c1, 1), ctx))


def test_gamma_context_matches_substitution():
    x = parse("tr(inv(h1)*d(h1)*d(h2)*inv(h2))")
    ctx = EvalContext(2, 2, seed=6)
    assert eval_form(x, GammaContext(ctx)) == pytest.approx(eval_form(substitute(x, gamma_map(2)), ctx))


def test_section_context_matches_substitution():
    x = parse("tr(th0*th1)")
    ctx = EvalContext(3, 2, seed=8)
    assert eval_form(x, SectionContext(ctx, 2)) == pytest.approx(eval_form(substitute(x, section_map(2)), ctx))


def test_callable_sides():
    x = parse("tr(th0*th1*th2)")
    rep = random_identity_check(lambda c: eval_form(x, c), x, n=2, degree=3)
    assert rep.passed


def test_seeded_checks_are_reproducible():
    x, y = parse("tr(th0*th1)"), parse("tr(th1*th2)")
    a = random_identity_check(x, y, seed=11, n=2)
    b = random_identity_check(x, y, seed=11, n=2)
    assert a.entries[0].residual == b.entries[0].residual

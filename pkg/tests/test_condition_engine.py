"""
Tests for the condition integral G and its feasibility certificates.

Exact values are cross-checked against an independent midpoint-rule
evaluation and against the float grid checker.
"""
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from app.core.errors import DomainError, ModeError
from app.models import ArithmeticMode, Constant, StepFunction, Verdict
from app.services import condition_engine, two_step
from tests.factories import random_step


def _reference_closed_form(z: float) -> float:
    kink = min(1.0, 4.0 * z)
    upper = 4.0 * (1.0 + z) * math.log((4.0 + kink) / (4.0 + z)) - (kink - z)
    lower = 4.0 * (1.0 - z) * math.log((4.0 + z) / 4.0) - z
    return upper + lower


def test_boundary_values(two_step_h, reference):
    """
    TEST 1 - G(0) = 0 and G(1) = −1 for every h
    """
    rng = random.Random(1)
    functions = [two_step_h, Constant.of("1"), Constant.of("0"), *(random_step(rng) for _ in range(20))]
    for h in functions:
        assert condition_engine.condition_value(h, Fraction(0)) == 0
        assert condition_engine.condition_value(h, Fraction(1)) == -1

    assert condition_engine.condition_value(reference, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert condition_engine.condition_value(reference, 1.0) == pytest.approx(-1.0, abs=1e-9)


def test_constant_one_quarter():
    """TEST 2 - h ≡ 1 gives G(1/4) = 1/8 exactly"""
    assert condition_engine.condition_value(Constant.of("1"), Fraction(1, 4)) == Fraction(1, 8)


def test_second_case_formula(two_step_h):
    """
    TEST 3 - On [1/α−1, 1/β−1) G is −2α z² + I z + (I − 1)

    with I = xα + (1−x)β; z = 1/10 lies in that interval.
    """
    alpha, beta, x = Fraction("0.971239"), Fraction("0.873362"), Fraction("0.236901")
    integral_h = x * alpha + (1 - x) * beta
    z = Fraction(1, 10)

    assert condition_engine.condition_value(two_step_h, z) == -2 * alpha * z**2 + integral_h * z + (integral_h - 1)


def test_float_z_gives_float():
    """TEST 4 - Float z or float data yields a float close to the exact value"""
    h = StepFunction.of(["0.3"], ["0.9", "0.7"])
    exact = condition_engine.condition_value(h, Fraction(1, 5))
    approx = condition_engine.condition_value(h, 0.2)

    assert isinstance(exact, Fraction)
    assert isinstance(approx, float)
    assert approx == pytest.approx(float(exact), abs=1e-12)


def test_z_out_of_range(two_step_h):
    """TEST 5 - z outside [0,1]"""
    with pytest.raises(DomainError):
        condition_engine.condition_value(two_step_h, Fraction(-1, 10))
    with pytest.raises(DomainError):
        condition_engine.condition_values(two_step_h, np.array([0.5, 1.5]))


def test_closed_form_matches_riemann_sum():
    """
    TEST 6 - Closed form vs midpoint rule on 10⁶ cells

    Breakpoints and z sit on the 1/1000 grid, so every discontinuity of the
    integrand falls on a cell boundary: 1000 (h, z) pairs.
    """
    rng = random.Random(6)
    for _ in range(200):
        h = random_step(rng)
        for _ in range(5):
            z = Fraction(rng.randint(0, 1000), 1000)
            exact = condition_engine.condition_value(h, z)
            riemann = condition_engine.riemann_condition_value(h, float(z))
            assert abs(float(exact) - riemann) <= 1e-8


def test_reference_quadrature(reference):
    """TEST 7 - Adaptive quadrature of the reference h matches its logarithmic closed form"""
    h = reference
    for z in (0.01, 0.1, 0.2, 0.25, 0.3, 0.5, 0.9):
        assert condition_engine.condition_value(h, z) == pytest.approx(_reference_closed_form(z), abs=1e-9)
    assert condition_engine.riemann_condition_value(h, 0.3) == pytest.approx(_reference_closed_form(0.3), abs=1e-8)


def test_vectorised_matches_scalar():
    """TEST 8 - condition_values agrees with condition_value"""
    rng = random.Random(8)
    zs = np.linspace(0.0, 1.0, 101)
    for _ in range(20):
        h = random_step(rng)
        vector = condition_engine.condition_values(h, zs)
        scalar = [float(condition_engine.condition_value(h, Fraction(z).limit_denominator(100))) for z in zs]
        assert np.allclose(vector, scalar, atol=1e-12)


def test_decompose_published_pieces(two_step_h):
    """
    TEST 9 - The two-step h splits at 1/α−1, 1/β−1 and x

    The three non-trivial pieces carry exactly the case quadratics.
    """
    params = two_step.paper_params()
    t_alpha, t_beta = two_step.case_thresholds(params)
    pieces = condition_engine.decompose(two_step_h)

    assert [p.left for p in pieces] == [0, t_alpha, t_beta, params.x]
    assert pieces[-1].right == 1
    for piece, (a, b, c) in zip(pieces[1:], two_step.case_polynomials(params)):
        assert (piece.a, piece.b, piece.c) == (a, b, c)


def test_decompose_constant():
    """TEST 10 - h ≡ c activates at 1/c − 1 and then G = c(1 + z − 2z²) − 1"""
    c = Fraction(8, 9)
    pieces = condition_engine.decompose(StepFunction.of([], [c]))

    assert [(p.left, p.right) for p in pieces] == [(0, Fraction(1, 8)), (Fraction(1, 8), 1)]
    assert (pieces[1].a, pieces[1].b, pieces[1].c) == (-2 * c, c, c - 1)


def test_decompose_low_value_adds_no_threshold():
    """TEST 11 - Values at most 1/2 never activate inside (0,1)"""
    pieces = condition_engine.decompose(StepFunction.of(["1/2"], ["0.4", "1/2"]))

    assert [(p.left, p.right) for p in pieces] == [(0, Fraction(1, 2)), (Fraction(1, 2), 1)]


def test_pieces_are_continuous_and_exact():
    """
    TEST 12 - Adjacent quadratics meet, and each piece reproduces G
    """
    rng = random.Random(12)
    for _ in range(200):
        h = random_step(rng)
        pieces = condition_engine.decompose(h)
        for left, right in zip(pieces, pieces[1:]):
            assert left.value(left.right) == right.value(right.left)
        for piece in pieces:
            z = piece.left + (piece.right - piece.left) * Fraction(rng.randint(0, 97), 97)
            assert piece.value(z) == condition_engine.condition_value(h, z)


def test_exact_certificate_two_step(two_step_h):
    """TEST 13 - The published two-step h is feasible with a strictly negative margin"""
    cert = condition_engine.check_feasible_exact(two_step_h)

    assert cert.verdict == Verdict.FEASIBLE
    assert cert.mode == ArithmeticMode.EXACT
    assert isinstance(cert.worst_margin, Fraction)
    assert cert.worst_margin < 0
    assert cert.witness is None
    assert len(cert.pieces) == len(cert.piece_bounds) == 4


def test_exact_certificate_constant_one():
    """TEST 14 - h ≡ 1 fails with witness 1/4 and margin 1/8"""
    cert = condition_engine.check_feasible_exact(Constant.of("1"))

    assert cert.verdict == Verdict.INFEASIBLE
    assert cert.witness == Fraction(1, 4)
    assert cert.worst_margin == Fraction(1, 8)


def test_exact_certificate_eight_ninths_is_tight():
    """
    TEST 15 - h ≡ 8/9 touches zero at z = 1/4 and is feasible

    Any constant above 8/9 is infeasible.
    """
    cert = condition_engine.check_feasible_exact(Constant.of("8/9"))
    assert cert.feasible
    assert cert.worst_margin == 0
    assert cert.worst_z == Fraction(1, 4)

    above = condition_engine.check_feasible_exact(Constant.of(Fraction(8, 9) + Fraction(1, 10**6)))
    assert not above.feasible
    assert above.worst_margin > 0


def test_exact_certificate_rejects_non_rational(reference):
    """TEST 16 - Float data or the reference h cannot be decided exactly"""
    with pytest.raises(ModeError):
        condition_engine.check_feasible_exact(reference)
    with pytest.raises(ModeError):
        condition_engine.check_feasible_exact(StepFunction.of([0.5], [0.9, 0.8]))


def test_exact_certificate_rejects_invalid():
    """TEST 17 - Invalid h is a DomainError"""
    with pytest.raises(DomainError):
        condition_engine.check_feasible_exact(StepFunction.of(["0.5"], ["1.5", "0.5"]))


def test_numeric_certificate_reference(reference):
    """TEST 18 - 4/(4+σ) passes the float check"""
    cert = condition_engine.check_feasible_numeric(reference)

    assert cert.verdict == Verdict.FEASIBLE
    assert cert.mode == ArithmeticMode.FLOAT
    assert cert.pieces == ()
    assert cert.worst_margin <= 1e-9


def test_numeric_certificate_constants():
    """TEST 19 - Numeric witness for h ≡ 1 is 1/4; h ≡ 0.9 fails, float two-step passes"""
    cert = condition_engine.check_feasible_numeric(Constant.of("1"))
    assert not cert.feasible
    assert cert.witness == pytest.approx(0.25, abs=1e-6)
    assert cert.worst_margin == pytest.approx(0.125, abs=1e-9)

    assert not condition_engine.check_feasible_numeric(Constant.of(0.9)).feasible

    float_two_step = StepFunction.of([0.236901], [0.971239, 0.873362])
    assert condition_engine.check_feasible_numeric(float_two_step).feasible


def test_numeric_certificate_published_locates_exact_worst_z(two_step_h):
    """
    TEST 20 - The grid search finds the same worst z as the exact certificate

    The worst point is the vertex of the first non-trivial quadratic near x/4.
    """
    exact = condition_engine.check_feasible_exact(two_step_h)
    numeric = condition_engine.check_feasible_numeric(two_step_h, grid_size=10001, tol=1e-9)

    assert numeric.feasible
    assert abs(numeric.worst_z - float(exact.worst_z)) <= 1e-3
    assert numeric.worst_margin == pytest.approx(float(exact.worst_margin), abs=1e-9)


@pytest.mark.parametrize("kwargs", [{"grid_size": 1}, {"tol": 0.0}, {"tol": -1e-9}])
def test_numeric_certificate_bad_arguments(two_step_h, kwargs):
    """TEST 21 - grid_size < 2 and non-positive tol are rejected"""
    with pytest.raises(DomainError):
        condition_engine.check_feasible_numeric(two_step_h, **kwargs)


def test_exact_and_numeric_agree():
    """
    TEST 22 - Exact and float verdicts agree away from the boundary

    500 random rational step functions; cases with |margin| ≤ 1e-6 are
    left out.
    """
    rng = random.Random(21)
    compared = 0
    for _ in range(500):
        h = random_step(rng)
        exact = condition_engine.check_feasible_exact(h)
        if abs(exact.worst_margin) <= Fraction(1, 10**6):
            continue
        numeric = condition_engine.check_feasible_numeric(h, grid_size=10001, tol=1e-7)
        assert exact.feasible == numeric.feasible
        compared += 1
    assert compared > 250


def test_monotone_in_constant_value():
    """TEST 23 - c1 ≤ c2 implies G_c1 ≤ G_c2 pointwise"""
    zs = np.linspace(0.0, 1.0, 1001)
    constants = [0.0, 0.3, 0.5, 0.7, 0.85, 8 / 9, 0.95, 1.0]
    curves = [condition_engine.condition_values(Constant.of(c), zs) for c in constants]
    for lower, upper in zip(curves, curves[1:]):
        assert np.all(lower <= upper + 1e-15)


def test_check_feasible_dispatch(two_step_h):
    """TEST 24 - Rational step data is certified exactly, everything else numerically"""
    assert condition_engine.check_feasible(two_step_h).mode == ArithmeticMode.EXACT
    assert condition_engine.check_feasible(Constant.of("8/9")).mode == ArithmeticMode.EXACT
    assert condition_engine.check_feasible(Constant.of(0.5)).mode == ArithmeticMode.FLOAT


def test_closed_form_matches_riemann_sum_off_grid():
    """
    TEST 25 - Closed form against the midpoint rule for z and breakpoints off the 1/1000 grid

    Breakpoints sit on the 10⁻⁶ cell edges; z falls inside a cell, which
    costs the midpoint rule at most half a cell times the jump at σ = z.
    """
    rng = random.Random(25)
    for _ in range(300):
        h = random_step(rng, resolution=10**6)
        z = Fraction(rng.randint(1, 10**7 - 1), 10**7)
        exact = condition_engine.condition_value(h, z)
        riemann = condition_engine.riemann_condition_value(h, float(z))
        assert abs(float(exact) - riemann) <= 1e-6


@pytest.mark.parametrize(
    "h",
    [Constant.of("0.5"), StepFunction.of(["0.3"], ["0.6", "0.2"])],
    ids=["constant-half", "two-step-falling"],
)
def test_falling_condition_reports_zero(h):
    """
    TEST 26 - When G only falls away from z = 0 both checkers report z = 0, margin 0

    G has no local maximum on (0,1], so z = 1 (its minimum) must not be
    reported as the worst point.
    """
    exact = condition_engine.check_feasible_exact(h)
    numeric = condition_engine.check_feasible_numeric(h)

    assert exact.feasible and numeric.feasible
    assert exact.worst_z == 0
    assert exact.worst_margin == 0
    assert numeric.worst_z == pytest.approx(float(exact.worst_z), abs=1e-3)
    assert numeric.worst_margin == pytest.approx(0.0, abs=1e-12)
    assert condition_engine.local_maxima(exact.pieces) == []


def test_local_maxima(two_step_h):
    """TEST 27 - Local maxima come from interior vertices and rising-then-falling boundaries"""
    peaks = condition_engine.local_maxima(condition_engine.check_feasible_exact(Constant.of("8/9")).pieces)
    assert [(p.z, p.margin) for p in peaks] == [(Fraction(1, 4), 0)]

    exact = condition_engine.check_feasible_exact(two_step_h)
    peaks = condition_engine.local_maxima(exact.pieces)
    assert exact.worst_z in [p.z for p in peaks]
    assert 0 < exact.worst_z < two_step_h.breakpoints[0].exact / 2
    assert max(p.margin for p in peaks) == exact.worst_margin

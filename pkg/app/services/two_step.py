"""
Two-step auxiliary functions: the three discriminant inequalities, the
optimal parameter system and its closed forms in complex radicals.

For h = α on [0, x), β on [x, 1] with 1/α−1 < 1/β−1 < x, the condition
integral reduces (outside the trivial first case) to three concave
quadratics in z. They are non-positive on all of ℝ iff their discriminants
d1, d2, d3 are non-positive, which is a sufficient test for feasibility.
"""
import logging
from fractions import Fraction
from typing import Any, List, Optional, Tuple

import mpmath

from app.core.config import settings
from app.core.errors import NumericalError, PrecisionError, StructuralError
from app.models import PaperModeVerdict, TwoStepParams
from app.models.functions import TWO_STEP_ALPHA, TWO_STEP_BETA, TWO_STEP_X
from app.models.two_step import discriminant_triple

logger = logging.getLogger(__name__)

Coefficients = Tuple[Any, Any, Any]


def paper_params() -> TwoStepParams:
    """The published six-digit constants as exact rationals"""
    return TwoStepParams.from_values(Fraction(TWO_STEP_ALPHA), Fraction(TWO_STEP_BETA), Fraction(TWO_STEP_X))


def discriminants(p: TwoStepParams) -> Tuple[Any, Any, Any]:
    """(d1, d2, d3); exact rationals when p holds rationals"""
    return discriminant_triple(p.alpha, p.beta, p.x)


def case_thresholds(p: TwoStepParams) -> Tuple[Any, Any]:
    """Activation thresholds (1/α − 1, 1/β − 1)"""
    return 1 / p.alpha - 1, 1 / p.beta - 1


def case_polynomials(p: TwoStepParams) -> List[Coefficients]:
    """
    (a, b, c) of the three non-trivial quadratics, on
    [1/α−1, 1/β−1), [1/β−1, x) and [x, 1] respectively.
    """
    alpha, beta, x = p.alpha, p.beta, p.x
    constant = x * alpha - 1 + (1 - x) * beta
    return [
        (-2 * alpha, x * alpha, x * alpha - x),
        (-2 * alpha, x * alpha + (1 - x) * beta, constant),
        (-2 * beta, -x * alpha + (x + 1) * beta, constant),
    ]


def check_case_ordering(p: TwoStepParams) -> None:
    """
    Raises:
        StructuralError: Unless 1/2 < β < α ≤ 1, 0 < x < 1 and 1/α−1 < 1/β−1 < x
    """
    if not (0 < p.x < 1 and 2 * p.beta > 1 and p.beta < p.alpha <= 1):
        raise StructuralError(f"two-step parameters out of range: α={p.alpha}, β={p.beta}, x={p.x}")
    t_alpha, t_beta = case_thresholds(p)
    if not t_alpha < t_beta < p.x:
        raise StructuralError(
            f"case ordering 1/α−1 < 1/β−1 < x violated: {float(t_alpha):.6g}, {float(t_beta):.6g}, {float(p.x):.6g}"
        )


def check_paper_mode(p: TwoStepParams) -> PaperModeVerdict:
    """
    Sufficient feasibility test: all three discriminants ≤ 0.

    The first case z < 1/α−1 is always non-positive, so only the three
    quadratics need a sign. A positive discriminant proves nothing either
    way, hence NOT_PROVEN rather than infeasible.
    """
    check_case_ordering(p)
    d1, d2, d3 = discriminants(p)
    verdict = PaperModeVerdict.FEASIBLE if (d1 <= 0 and d2 <= 0 and d3 <= 0) else PaperModeVerdict.NOT_PROVEN
    logger.info(f"Discriminant test: {verdict.value} | d1={float(d1):.6g} d2={float(d2):.6g} d3={float(d3):.6g}")
    return verdict


def x_of_alpha(alpha: Any) -> Any:
    # d1 = xα(xα + 8(α − 1)) vanishes for x ≠ 0 iff x = 8(1/α − 1)
    return 8 * (1 / alpha - 1)


def beta_of_alpha(alpha: Any) -> Any:
    return 2 * (-45 + 172 * alpha - 128 * alpha**2) / 3


def _closure(alpha: Any) -> Any:
    """d3 with x and β eliminated through the d1 = 0 and d2 = 0 relations"""
    return discriminant_triple(alpha, beta_of_alpha(alpha), x_of_alpha(alpha))[2]


def _root_in_cell(lo: Any, hi: Any, tol: float, residual_tol: float) -> Any:
    step_tol = mpmath.mpf(tol)
    while True:
        alpha = mpmath.findroot(_closure, (lo, hi), solver="bisect", tol=step_tol, maxsteps=400, verify=False)
        if abs(_closure(alpha)) <= residual_tol or step_tol < mpmath.eps * 10**6:
            return alpha
        step_tol /= 10**4


def solve_optimum(
    bracket: Optional[Tuple[float, float]] = None,
    tol: Optional[float] = None,
    residual_tol: Optional[float] = None,
) -> TwoStepParams:
    """
    Solve d1 = d2 = d3 = 0.

    x = 8(1/α − 1) removes d1, β = (2/3)(−45 + 172α − 128α²) removes d2, and
    the remaining equation d3(α) = 0 is root-found by bisection inside the
    α bracket. d3(α) has more than one sign change in (0.9, 1.0), so the
    bracket is scanned and the root yielding a valid two-step h (1/2 < β < α)
    with |d2| within residual_tol is returned. Work is done at MP_DPS digits.

    Raises:
        NumericalError: If no valid root lies in the bracket
    """
    low, high = bracket or (settings.ALPHA_BRACKET_LOW, settings.ALPHA_BRACKET_HIGH)
    tol = settings.BISECTION_TOL if tol is None else tol
    residual_tol = settings.RESIDUAL_TOL if residual_tol is None else residual_tol
    cells = settings.ALPHA_SCAN_CELLS

    with mpmath.workdps(settings.MP_DPS):
        low, high = mpmath.mpf(low), mpmath.mpf(high)
        grid = [low + (high - low) * i / cells for i in range(cells + 1)]
        signs = [_closure(a) for a in grid]
        for lo, hi, f_lo, f_hi in zip(grid, grid[1:], signs, signs[1:]):
            if (f_lo < 0) == (f_hi < 0) and f_lo != 0:
                continue
            alpha = lo if f_lo == 0 else _root_in_cell(lo, hi, tol, residual_tol / 100)
            beta = beta_of_alpha(alpha)
            x = x_of_alpha(alpha)
            d1, d2, d3 = discriminant_triple(alpha, beta, x)
            valid = mpmath.mpf(1) / 2 < beta < alpha <= 1 and 0 < x < 1
            logger.debug(f"Root candidate α={mpmath.nstr(alpha, 17)} β={mpmath.nstr(beta, 17)} valid={valid}")
            if valid and max(abs(d1), abs(d2), abs(d3)) <= residual_tol:
                params = TwoStepParams(
                    alpha=float(alpha),
                    beta=float(beta),
                    x=float(x),
                    residual1=float(d1),
                    residual2=float(d2),
                    residual3=float(d3),
                )
                logger.info(f"Two-step optimum: α={params.alpha!r} β={params.beta!r} x={params.x!r}")
                return params

    raise NumericalError(f"no valid root of the two-step system in α ∈ ({low}, {high})")


def _radicand() -> mpmath.mpc:
    return mpmath.mpc(-377, 18 * mpmath.sqrt(762))


def _principal_root(w: mpmath.mpc, power: int) -> mpmath.mpc:
    return mpmath.exp(mpmath.log(w) * power / 3)


def alpha_expression() -> mpmath.mpc:
    """α = (34 + 73/∛w + ∛w)/48 with w = −377 + 18i√762, principal roots, before projection"""
    with mpmath.workdps(settings.MP_DPS):
        root = _principal_root(_radicand(), 1)
        return (34 + 73 / root + root) / 48


def rho_expression() -> mpmath.mpc:
    """The exact two-step ρ* as a quotient of complex radicals, before projection"""
    with mpmath.workdps(settings.MP_DPS):
        w = _radicand()
        s = mpmath.sqrt(762)
        i = mpmath.mpc(0, 1)
        root1 = _principal_root(w, 1)
        root2 = _principal_root(w, 2)
        numerator = (
            -30 * (377 * i + 18 * s)
            + root2 * (-249 * i + 28 * s)
            + root1 * (-3975 * i + 206 * s)
        )
        denominator = 4 * (
            root2 * (-44 * i + 7 * s)
            - 16 * (377 * i + 18 * s)
            + root1 * (-1088 * i + 47 * s)
        )
        return numerator / denominator


def _project(value: mpmath.mpc, name: str) -> mpmath.mpf:
    if abs(value.imag) > settings.IMAG_RESIDUE_BOUND:
        raise PrecisionError(f"{name}: imaginary residue {mpmath.nstr(value.imag, 5)} exceeds bound")
    return value.real


def closed_form_alpha() -> mpmath.mpf:
    """Real α from the complex-radical closed form"""
    return _project(alpha_expression(), "alpha")


def closed_form_rho() -> mpmath.mpf:
    """Real ρ* of the exact two-step optimum"""
    return _project(rho_expression(), "rho")


def closed_form_params() -> Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    """(α, β, x) derived from the closed-form α"""
    with mpmath.workdps(settings.MP_DPS):
        alpha = closed_form_alpha()
        return alpha, beta_of_alpha(alpha), x_of_alpha(alpha)

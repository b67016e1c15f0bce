"""
Condition integral of an auxiliary function and its feasibility certificates.

    G(z) = ∫_z^1 max{0, h(σ)(1+z) − 1} dσ + ∫_0^z (h(σ)(1−z) − 1) dσ

h is feasible when G(z) ≤ 0 for every z in [0,1]. For step functions G is a
piecewise quadratic in z whose pieces are delimited by the step breakpoints
and by the activation thresholds 1/v − 1 of the max term, which makes an
exact rational decision possible. The reference h is handled by quadrature.
"""
import logging
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from app.core.config import settings
from app.core.errors import DomainError, ModeError
from app.models import (
    ArithmeticMode,
    AuxFunction,
    FeasibilityCertificate,
    Number,
    PieceBound,
    QuadraticPiece,
    ReferenceTV,
    StepFunction,
    Verdict,
)
from app.services.func_model import as_step_function, validate
from app.services.golden_section import golden_section_max
from app.services.quadrature import integrate_adaptive_simpson

logger = logging.getLogger(__name__)


def _check_z(z: Number) -> None:
    if not 0 <= z <= 1:
        raise DomainError(f"z={z} outside [0,1]")


def _step_condition_value(edges: Sequence[Number], values: Sequence[Number], z: Number) -> Number:
    total = z - z
    for s, e, v in zip(edges, edges[1:], values):
        above = e - max(s, z)
        if above > 0:
            excess = v * (1 + z) - 1
            if excess > 0:
                total += above * excess
        below = min(e, z) - s
        if below > 0:
            total += below * (v * (1 - z) - 1)
    return total


def _reference_condition_value(z: float, tol: Optional[float] = None) -> float:
    # the max term switches off at σ = 4z, where 4(1+z)/(4+σ) = 1
    kink = min(1.0, 4.0 * z)
    upper = integrate_adaptive_simpson(lambda s: 4.0 * (1.0 + z) / (4.0 + s) - 1.0, z, kink, tol)
    lower = integrate_adaptive_simpson(lambda s: 4.0 * (1.0 - z) / (4.0 + s) - 1.0, 0.0, z, tol)
    return upper + lower


def condition_value(h: AuxFunction, z: Number) -> Number:
    """
    Evaluate G(z).

    Step and constant functions use the closed form; the result is an exact
    Fraction when z is rational (Fraction or int) and the data are exact.
    The reference h is integrated numerically.

    Raises:
        DomainError: If z is outside [0,1]
    """
    _check_z(z)
    if isinstance(h, ReferenceTV):
        return _reference_condition_value(float(z))
    step = as_step_function(h)
    exact = step.is_exact and isinstance(z, (Fraction, int))
    if exact:
        z = Fraction(z)
    else:
        z = float(z)
    return _step_condition_value(step.edges(exact), step.piece_values(exact), z)


def condition_values(h: AuxFunction, zs: np.ndarray) -> np.ndarray:
    """Vectorised float G over an array of z values"""
    zs = np.asarray(zs, dtype=float)
    if zs.size and (zs.min() < 0 or zs.max() > 1):
        raise DomainError("z values outside [0,1]")
    if isinstance(h, ReferenceTV):
        return np.array([_reference_condition_value(float(z)) for z in zs])

    step = as_step_function(h)
    edges = np.array(step.edges(False))
    s = edges[:-1, None]
    e = edges[1:, None]
    v = np.array(step.piece_values(False))[:, None]
    z = zs[None, :]
    above = np.clip(e - np.maximum(s, z), 0.0, None)
    below = np.clip(np.minimum(e, z) - s, 0.0, None)
    terms = above * np.maximum(0.0, v * (1.0 + z) - 1.0) + below * (v * (1.0 - z) - 1.0)
    return terms.sum(axis=0)


def riemann_condition_value(h: AuxFunction, z: float, cells: int = 1_000_000) -> float:
    """Midpoint-rule G(z) straight from the integrand, independent of the closed form"""
    _check_z(z)
    sigma = (np.arange(cells) + 0.5) / cells
    if isinstance(h, ReferenceTV):
        hs = 4.0 / (4.0 + sigma)
    else:
        step = as_step_function(h)
        bps = np.array([b.value for b in step.breakpoints])
        hs = np.array(step.piece_values(False))[np.searchsorted(bps, sigma, side="right")]
    integrand = np.where(sigma >= z, np.maximum(0.0, hs * (1.0 + z) - 1.0), hs * (1.0 - z) - 1.0)
    return float(integrand.sum() / cells)


def decompose(h: StepFunction, exact: Optional[bool] = None) -> List[QuadraticPiece]:
    """
    Split [0,1] into intervals on which G is a single quadratic.

    Boundaries are 0, 1, the step breakpoints and every activation threshold
    1/v − 1 that falls strictly inside (0,1) (piece values v in (1/2, 1)).

    Args:
        h: Valid step function
        exact: Rational coefficients; defaults to whether h has exact data

    Returns:
        Quadratic pieces in increasing order covering [0,1]
    """
    exact = h.is_exact if exact is None else exact
    one = Fraction(1) if exact else 1.0
    zero = one - one
    edges = h.edges(exact)
    values = h.piece_values(exact)

    points = set(edges)
    for v in values:
        if 2 * v > one:
            threshold = one / v - one
            if 0 < threshold < 1:
                points.add(threshold)
    points = sorted(points)

    pieces = []
    for left, right in zip(points, points[1:]):
        mid = (left + right) / 2
        a = b = c = zero
        for s, e, v in zip(edges, edges[1:], values):
            active = v * (one + mid) > one
            length = e - s
            if e <= left:
                # entirely below z
                b -= length * v
                c += length * (v - one)
            elif s >= right:
                # entirely above z
                if active:
                    b += length * v
                    c += length * (v - one)
            else:
                # z runs through this piece: (z − s)(v − 1 − vz) plus (e − z)(v − 1 + vz) when active
                a -= v
                b += (v - one) + s * v
                c -= s * (v - one)
                if active:
                    a -= v
                    b += e * v - (v - one)
                    c += e * (v - one)
        pieces.append(QuadraticPiece(left=left, right=right, a=a, b=b, c=c))
    return pieces


def _rises_into(piece: QuadraticPiece, z: Number) -> bool:
    slope = piece.slope(z)
    return slope > 0 or (slope == 0 and piece.a <= 0)


def _falls_from(piece: QuadraticPiece, z: Number) -> bool:
    slope = piece.slope(z)
    return slope < 0 or (slope == 0 and piece.a <= 0)


def local_maxima(pieces: Sequence[QuadraticPiece]) -> List[PieceBound]:
    """
    Local maxima of G on (0,1] from its quadratic decomposition.

    Interior vertices of concave pieces always qualify. A piece boundary
    qualifies when G does not decrease into it from the left and does not
    increase out of it to the right; z = 1 only needs the left side.
    """
    found = []
    for i, piece in enumerate(pieces):
        if piece.a < 0:
            vertex = -piece.b / (2 * piece.a)
            if piece.left < vertex < piece.right:
                found.append(PieceBound(z=vertex, margin=piece.value(vertex)))
        z = piece.right
        if _rises_into(piece, z) and (i + 1 == len(pieces) or _falls_from(pieces[i + 1], z)):
            found.append(PieceBound(z=z, margin=piece.value(z)))
    return found


def check_feasible_exact(h: AuxFunction) -> FeasibilityCertificate:
    """
    Decide G(z) ≤ 0 on [0,1] exactly for a rational step (or constant) h.

    Each quadratic piece is maximised over its own interval with the vertex
    rule. G(0) = 0 for every h, so the worst point is the highest local
    maximum of G on (0,1]; when G has none there, G only falls away from
    z = 0 and the worst point is z = 0 with margin 0. A worst margin of
    exactly 0 is feasible.

    Raises:
        ModeError: If h is not a step/constant function with rational data
        DomainError: If h violates its invariants
    """
    step = as_step_function(h)
    if not step.is_exact:
        raise ModeError("exact certification needs rational data; use check_feasible_numeric")
    violations = validate(step)
    if violations:
        raise DomainError("; ".join(violations))

    pieces = decompose(step, exact=True)
    bounds = []
    for piece in pieces:
        z, margin = piece.maximum()
        bounds.append(PieceBound(z=z, margin=margin))

    worst = PieceBound(z=Fraction(0), margin=Fraction(0))
    peaks = sorted(local_maxima(pieces), key=lambda b: b.z)
    if peaks:
        worst = peaks[0]
        for bound in peaks[1:]:
            if bound.margin > worst.margin:
                worst = bound

    feasible = worst.margin <= 0
    logger.info(
        f"Exact certificate: {'feasible' if feasible else 'infeasible'} | "
        f"{len(pieces)} pieces | worst_z={float(worst.z):.9g} margin={float(worst.margin):.6g}"
    )
    return FeasibilityCertificate(
        verdict=Verdict.FEASIBLE if feasible else Verdict.INFEASIBLE,
        mode=ArithmeticMode.EXACT,
        worst_z=worst.z,
        worst_margin=worst.margin,
        pieces=tuple(pieces),
        piece_bounds=tuple(bounds),
        witness=None if feasible else worst.z,
    )


def check_feasible_numeric(
    h: AuxFunction,
    grid_size: Optional[int] = None,
    tol: Optional[float] = None,
    iterations: Optional[int] = None,
) -> FeasibilityCertificate:
    """
    Float feasibility check on a uniform z grid with golden-section refinement.

    The highest grid local maximum in (0,1] is refined on its two
    neighbouring cells; without one the worst point is z = 0 with G(0) = 0.
    h is feasible iff the refined maximum is at most tol.

    Args:
        h: Any auxiliary function
        grid_size: Number of grid points, at least 2 (default NUMERIC_GRID_SIZE)
        tol: Feasibility tolerance, positive (default NUMERIC_TOL)
        iterations: Golden-section iterations (default GOLDEN_ITERATIONS)
    """
    grid_size = settings.NUMERIC_GRID_SIZE if grid_size is None else grid_size
    tol = settings.NUMERIC_TOL if tol is None else tol
    iterations = settings.GOLDEN_ITERATIONS if iterations is None else iterations
    if grid_size < 2:
        raise DomainError(f"grid_size={grid_size} must be at least 2")
    if tol <= 0:
        raise DomainError(f"tol={tol} must be positive")
    violations = validate(h)
    if violations:
        raise DomainError("; ".join(violations))

    zs = np.linspace(0.0, 1.0, grid_size)
    values = condition_values(h, zs)
    # grid local maxima on (0,1]; argmax keeps the smallest z on ties
    rising = values[1:] >= values[:-1]
    falling = np.append(values[1:-1] >= values[2:], True)
    peaks = np.flatnonzero(rising & falling) + 1
    i = int(peaks[np.argmax(values[peaks])]) if peaks.size else 0
    worst_z, worst_margin = float(zs[i]), float(values[i])

    if i > 0:
        if i in (1, grid_size - 1):
            logger.warning(f"Grid maximum at the boundary cell z={worst_z:.9g} ({h.kind.value}); refinement is one-sided")
        lo, hi = float(zs[i - 1]), float(zs[min(i + 1, grid_size - 1)])
        z_ref, g_ref = golden_section_max(lambda z: float(condition_value(h, z)), lo, hi, iterations)
        if g_ref > worst_margin:
            worst_z, worst_margin = z_ref, g_ref

    feasible = worst_margin <= tol
    logger.info(
        f"Numeric certificate ({h.kind.value}): {'feasible' if feasible else 'infeasible'} | "
        f"grid={grid_size} worst_z={worst_z:.9g} margin={worst_margin:.6g} tol={tol:g}"
    )
    return FeasibilityCertificate(
        verdict=Verdict.FEASIBLE if feasible else Verdict.INFEASIBLE,
        mode=ArithmeticMode.FLOAT,
        worst_z=worst_z,
        worst_margin=worst_margin,
        witness=None if feasible else worst_z,
    )


def check_feasible(h: AuxFunction) -> FeasibilityCertificate:
    """Exact certificate when h has rational step data, numeric otherwise"""
    if isinstance(h, ReferenceTV):
        return check_feasible_numeric(h)
    step = as_step_function(h)
    if step.is_exact:
        return check_feasible_exact(step)
    return check_feasible_numeric(step)

"""
Cutting-plane maximisation of ∫₀¹ h over k-step functions subject to G(z) ≤ 0.

The semi-infinite constraint family {G(z) ≤ 0 : z ∈ [0,1]} is replaced by a
finite set of cuts. For a cut z with piece lengths above/below z,

    Σ_i above_i · t_i + Σ_i below_i · (v_i(1−z) − 1) ≤ 0,
    t_i ≥ v_i(1+z) − 1,  t_i ≥ 0,

linearises the max term. Each LP iterate is rounded down to a rational and
certified exactly; violated z values become new cuts. G is non-decreasing in
every v_i, so rounding down and shrinking can only help feasibility.
"""
import logging
import math
from decimal import ROUND_FLOOR, ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from app.core.config import settings
from app.core.errors import ConvergenceError, InternalError
from app.models import (
    BreakpointMode,
    CutRecord,
    Dual,
    FeasibilityCertificate,
    OptimizeConfig,
    OptimizeResult,
    StepFunction,
)
from app.services.condition_engine import check_feasible_exact
from app.services.func_model import integral
from app.services.golden_section import golden_section_max
from app.services.rho import rho_from_integral

logger = logging.getLogger(__name__)

BREAKPOINT_MARGIN = 1e-6
CUT_DEDUP_TOL = 1e-12


def worst_violation(h: StepFunction) -> Optional[Fraction]:
    """Exact worst z when h violates the condition, else None"""
    certificate = check_feasible_exact(h)
    return certificate.worst_z if certificate.worst_margin > 0 else None


def _solve_lp(edges: Sequence[float], cuts: Sequence[float], lp_tolerance: float) -> np.ndarray:
    """Maximise Σ length_i·v_i subject to the linearised cuts"""
    k = len(edges) - 1
    s = np.array(edges[:-1])
    e = np.array(edges[1:])
    lengths = e - s

    rows: List[int] = []
    cols: List[int] = []
    data: List[float] = []
    rhs: List[float] = []
    n_vars = k

    for z in cuts:
        above = np.clip(e - np.maximum(s, z), 0.0, None)
        below = np.clip(np.minimum(e, z) - s, 0.0, None)
        cut_row = len(rhs)
        rhs.append(float(below.sum()))
        for i in range(k):
            if below[i] > 0:
                rows.append(cut_row)
                cols.append(i)
                data.append(below[i] * (1.0 - z))
            if above[i] > 0:
                t = n_vars
                n_vars += 1
                rows.append(cut_row)
                cols.append(t)
                data.append(above[i])
                # (1+z)·v_i − t ≤ 1
                rows.extend((len(rhs), len(rhs)))
                cols.extend((i, t))
                data.extend((1.0 + z, -1.0))
                rhs.append(1.0)

    objective = np.zeros(n_vars)
    objective[:k] = -lengths
    bounds = [(0.0, 1.0)] * k + [(0.0, None)] * (n_vars - k)
    a_ub = sparse.coo_matrix((data, (rows, cols)), shape=(len(rhs), n_vars)).tocsr()

    result = linprog(
        objective,
        A_ub=a_ub,
        b_ub=np.array(rhs),
        bounds=bounds,
        method="highs",
        options={"primal_feasibility_tolerance": lp_tolerance, "dual_feasibility_tolerance": lp_tolerance},
    )
    if result.status != 0:
        # v ≡ 0 is always feasible and the objective is bounded
        raise InternalError(f"LP failed with status {result.status}: {result.message}")
    return np.clip(result.x[:k], 0.0, 1.0)


def _floor_decimal(value: float, digits: int) -> Decimal:
    return Decimal(repr(float(value))).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_FLOOR)


def _rational_iterate(breakpoints: Sequence[Fraction], values: np.ndarray, digits: int) -> StepFunction:
    return StepFunction(
        breakpoints=tuple(Dual.parse(b) for b in breakpoints),
        values=tuple(Dual.parse(min(max(_floor_decimal(v, digits), Decimal(0)), Decimal(1))) for v in values),
    )


def _shrink(h: StepFunction, shrink: float) -> StepFunction:
    factor = 1 - Fraction(repr(shrink))
    return StepFunction(breakpoints=h.breakpoints, values=tuple(Dual.parse(v.exact * factor) for v in h.values))


def _result(
    h: StepFunction,
    certificate: FeasibilityCertificate,
    rounds: int,
    cuts: Sequence[float],
    cut_log: Sequence[CutRecord],
) -> OptimizeResult:
    integral_h = integral(h)
    return OptimizeResult(
        h=h,
        rho=rho_from_integral(integral_h),
        integral_h=integral_h,
        rounds=rounds,
        cuts_used=tuple(cuts),
        certificate=certificate,
        cut_log=tuple(cut_log),
    )


def optimize_fixed(breakpoints: Sequence[Fraction], cfg: OptimizeConfig) -> OptimizeResult:
    """
    Cutting-plane loop on fixed rational breakpoints.

    Raises:
        ConvergenceError: If max_rounds pass without a certified iterate
    """
    edges = [0.0, *(float(b) for b in breakpoints), 1.0]
    n = cfg.initial_z_cuts
    cuts: List[float] = [j / (n - 1) for j in range(n)]
    cut_log: List[CutRecord] = []
    shrink = cfg.feasibility_shrink
    last: Optional[StepFunction] = None

    for round_no in range(1, cfg.max_rounds + 1):
        values = _solve_lp(edges, cuts, cfg.lp_tolerance)
        h = _rational_iterate(breakpoints, values, cfg.round_digits)
        last = h

        certificate = check_feasible_exact(h)
        if certificate.feasible:
            logger.info(f"Certified after {round_no} round(s), {len(cuts)} cuts")
            return _result(h, certificate, round_no, cuts, cut_log)

        shrunk = _shrink(h, shrink)
        shrunk_certificate = check_feasible_exact(shrunk)
        if shrunk_certificate.feasible:
            logger.info(f"Certified after {round_no} round(s) with shrink {shrink:g}, {len(cuts)} cuts")
            return _result(shrunk, shrunk_certificate, round_no, cuts, cut_log)

        violated = sorted(
            (b for b in certificate.piece_bounds if b.margin > 0), key=lambda b: b.margin, reverse=True
        )
        added: List[float] = []
        for bound in violated:
            z = float(bound.z)
            if any(abs(z - c) <= CUT_DEDUP_TOL for c in cuts) or any(abs(z - c) <= CUT_DEDUP_TOL for c in added):
                continue
            added.append(z)
            cut_log.append(CutRecord(round=round_no, z=bound.z, violation=bound.margin, iterate=h))
            logger.debug(f"Round {round_no}: cut z={z:.12g} violation={float(bound.margin):.3e}")

        if not added:
            shrink = min(shrink * 10, settings.OPT_MAX_SHRINK)
            logger.warning(f"Round {round_no}: violation sits on existing cuts, shrink raised to {shrink:g}")
        cuts.extend(added)

    raise ConvergenceError(
        f"no certified iterate after {cfg.max_rounds} rounds", last_iterate=last, rounds=cfg.max_rounds
    )


def _quantize_breakpoints(points: Sequence[float], digits: int) -> Tuple[Fraction, ...]:
    step = Decimal(1).scaleb(-digits)
    return tuple(Fraction(Decimal(repr(p)).quantize(step, rounding=ROUND_HALF_EVEN)) for p in points)


def _refine(cfg: OptimizeConfig) -> OptimizeResult:
    """Cyclic golden-section search over breakpoints, one cutting-plane run per evaluation"""
    k = cfg.num_pieces
    points = [j / k for j in range(1, k)]
    cache: Dict[Tuple[Fraction, ...], Optional[OptimizeResult]] = {}

    def evaluate(trial: Sequence[float]) -> Optional[OptimizeResult]:
        key = _quantize_breakpoints(trial, cfg.round_digits)
        if key not in cache:
            try:
                cache[key] = optimize_fixed(key, cfg)
            except ConvergenceError as e:
                logger.warning(f"Breakpoints {[float(b) for b in key]} not certified: {e}")
                cache[key] = None
        return cache[key]

    def score(result: Optional[OptimizeResult]) -> float:
        return -math.inf if result is None else float(result.integral_h)

    best = evaluate(points)
    for sweep in range(cfg.refine_sweeps):
        moved = False
        for j in range(k - 1):
            lo = (points[j - 1] if j > 0 else 0.0) + BREAKPOINT_MARGIN
            hi = (points[j + 1] if j < k - 2 else 1.0) - BREAKPOINT_MARGIN

            def objective(p: float) -> float:
                trial = list(points)
                trial[j] = p
                return score(evaluate(trial))

            p, value = golden_section_max(objective, lo, hi, cfg.refine_iterations)
            if value > score(best):
                points[j] = p
                best = evaluate(points)
                moved = True
        logger.info(f"Refine sweep {sweep + 1}: integral={score(best):.12g} breakpoints={[round(p, 9) for p in points]}")
        if not moved:
            break

    if best is None:
        raise ConvergenceError("breakpoint refinement found no certified iterate", rounds=cfg.max_rounds)
    return best


def optimize(cfg: OptimizeConfig) -> OptimizeResult:
    """
    Maximise ∫₀¹ h over k-step functions satisfying the condition.

    Uniform mode fixes breakpoints at j/k; refine mode additionally moves
    them by cyclic golden-section search. The result always carries a
    feasible exact certificate.

    Raises:
        ConvergenceError: If the cutting-plane loop cannot certify an iterate
    """
    logger.info(f"Optimizing k={cfg.num_pieces} ({cfg.breakpoint_mode.value})")
    if cfg.breakpoint_mode == BreakpointMode.REFINE and cfg.num_pieces > 1:
        result = _refine(cfg)
    else:
        breakpoints = [Fraction(j, cfg.num_pieces) for j in range(1, cfg.num_pieces)]
        result = optimize_fixed(breakpoints, cfg)
    logger.info(f"Optimum k={cfg.num_pieces}: rho={float(result.rho):.12g} after {result.rounds} round(s)")
    return result

"""
Pointwise evaluation, integration and validation of auxiliary functions.
"""
import logging
import math
from fractions import Fraction
from typing import List

from app.core.errors import DomainError, ModeError
from app.models import AuxFunction, Constant, Number, ReferenceTV, StepFunction

logger = logging.getLogger(__name__)

REFERENCE_TV_INTEGRAL = 4.0 * math.log(5.0 / 4.0)


def _check_unit(name: str, value: Number) -> None:
    if not 0 <= value <= 1:
        raise DomainError(f"{name}={value} outside [0,1]")


def evaluate(h: AuxFunction, sigma: Number) -> float:
    """
    Evaluate h(σ) under the half-open piece convention.

    Args:
        h: Auxiliary function
        sigma: Point in [0,1]

    Returns:
        h(σ) as a float

    Raises:
        DomainError: If σ is outside [0,1]
    """
    _check_unit("sigma", sigma)
    if isinstance(h, StepFunction):
        return h.values[h.piece_index(sigma)].value
    if isinstance(h, Constant):
        return h.value.value
    return ReferenceTV.at(float(sigma))


def evaluate_exact(h: AuxFunction, sigma: Fraction) -> Fraction:
    """Exact h(σ) for rational step or constant data"""
    _check_unit("sigma", sigma)
    if isinstance(h, StepFunction):
        value = h.values[h.piece_index(Fraction(sigma))]
    elif isinstance(h, Constant):
        value = h.value
    else:
        raise ModeError("reference h has no exact pointwise form")
    if value.exact is None:
        raise ModeError("function data is not rational")
    return value.exact


def integral(h: AuxFunction) -> Number:
    """
    ∫₀¹ h(σ) dσ.

    Exact (a Fraction) for step and constant functions with rational data,
    a float otherwise. The reference h integrates to 4·ln(5/4).
    """
    if isinstance(h, StepFunction):
        exact = h.is_exact
        edges = h.edges(exact)
        values = h.piece_values(exact)
        return sum(((edges[i + 1] - edges[i]) * v for i, v in enumerate(values)), Fraction(0) if exact else 0.0)
    if isinstance(h, Constant):
        return h.value.exact if h.value.is_exact else h.value.value
    return REFERENCE_TV_INTEGRAL


def validate(h: AuxFunction) -> List[str]:
    """
    Collect every invariant violation of h.

    Returns:
        List of violation messages; empty when h is valid
    """
    violations: List[str] = []
    if isinstance(h, StepFunction):
        bps = [b.exact if b.is_exact else b.value for b in h.breakpoints]
        if len(h.values) != len(bps) + 1:
            violations.append(
                f"values length mismatch: {len(h.values)} values for {len(bps)} breakpoints"
            )
        for b in bps:
            if not 0 < b < 1:
                violations.append(f"breakpoint {b} not in (0,1)")
        if any(later <= earlier for earlier, later in zip(bps, bps[1:])):
            violations.append("breakpoints not increasing")
        for i, v in enumerate(h.values):
            value = v.exact if v.is_exact else v.value
            if not 0 <= value <= 1:
                violations.append(f"value out of [0,1]: piece {i} has {value}")
    elif isinstance(h, Constant):
        value = h.value.exact if h.value.is_exact else h.value.value
        if not 0 <= value <= 1:
            violations.append(f"value out of [0,1]: constant {value}")

    if violations:
        logger.debug(f"validate({h.kind.value}) -> {len(violations)} violation(s)")
    return violations


def as_step_function(h: AuxFunction) -> StepFunction:
    """View a constant as its one-piece step function"""
    if isinstance(h, StepFunction):
        return h
    if isinstance(h, Constant):
        return StepFunction(breakpoints=(), values=(h.value,))
    raise ModeError("the reference h is not a step function; use check_feasible_numeric")

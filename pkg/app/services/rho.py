"""
Integrality-ratio upper bound ρ* = 1 + 1/(1 + ∫₀¹ h) of a feasible h.
"""
import logging
from fractions import Fraction

from app.core.errors import BoundNotEstablishedError, DomainError
from app.models import AuxFunction, Number, RatioResult
from app.services.condition_engine import check_feasible
from app.services.func_model import integral, validate

logger = logging.getLogger(__name__)


def rho_from_integral(integral_h: Number) -> Number:
    one = Fraction(1) if isinstance(integral_h, Fraction) else 1.0
    return one + one / (one + integral_h)


def rho_star(h: AuxFunction, require_feasible: bool = True) -> RatioResult:
    """
    Compute ρ* for h.

    Args:
        h: Auxiliary function
        require_feasible: Certify the condition first (exact for rational
            step data, numeric otherwise) and refuse infeasible h

    Returns:
        RatioResult; exact when h has rational step data

    Raises:
        DomainError: If h violates its invariants
        BoundNotEstablishedError: If require_feasible and h is infeasible
    """
    violations = validate(h)
    if violations:
        raise DomainError("; ".join(violations))

    certificate = None
    if require_feasible:
        certificate = check_feasible(h)
        if not certificate.feasible:
            logger.warning(
                f"Bound not established for {h.kind.value}: G({float(certificate.witness):.9g}) = "
                f"{float(certificate.worst_margin):.6g} > 0"
            )
            raise BoundNotEstablishedError(
                f"h violates the condition at z={float(certificate.witness):.12g}",
                witness=certificate.witness,
                margin=certificate.worst_margin,
            )

    integral_h = integral(h)
    rho = rho_from_integral(integral_h)
    logger.info(f"rho_star({h.kind.value}) = {float(rho):.12g} (integral {float(integral_h):.12g})")
    return RatioResult(rho=rho, integral_h=integral_h, feasibility=certificate)

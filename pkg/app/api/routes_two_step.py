import logging

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel

from app.core.errors import AuxBoundError, DomainError, StructuralError
from app.models import Dual, TwoStepParams
from app.services import rho, two_step
from app.services.function_io import NumberText
from app.services.reporting import ClosedFormOut, DiscriminantsOut, TwoStepOut, format_number, to_json_number

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/two-step", tags=["two-step"])


class TwoStepRequest(BaseModel):
    alpha: NumberText
    beta: NumberText
    x: NumberText


@router.get("/optimum", response_model=TwoStepOut)
def two_step_optimum():
    """Solve d1 = d2 = d3 = 0"""
    logger.info("GET /two-step/optimum")
    try:
        params = two_step.solve_optimum()
    except AuxBoundError as e:
        logger.error(f"Two-step solve failed: {e}")
        raise HTTPException(status_code=500, detail=str(e))
    result = rho.rho_star(params.to_step_function(), require_feasible=False)
    return TwoStepOut.from_params(params, result.rho)


@router.get("/closed-form", response_model=ClosedFormOut)
def two_step_closed_form():
    """Closed-form α, β, x and ρ* in complex radicals"""
    logger.info("GET /two-step/closed-form")
    try:
        alpha, beta, x = two_step.closed_form_params()
        rho_value = two_step.closed_form_rho()
    except AuxBoundError as e:
        logger.error(f"Closed form failed: {e}")
        raise HTTPException(status_code=500, detail=str(e))
    return ClosedFormOut(
        alpha=format_number(alpha, 20),
        beta=format_number(beta, 20),
        x=format_number(x, 20),
        rho=format_number(rho_value, 20),
        alpha_imag_residue=format_number(abs(two_step.alpha_expression().imag), 3),
        rho_imag_residue=format_number(abs(two_step.rho_expression().imag), 3),
    )


@router.post("/discriminants", response_model=DiscriminantsOut)
def two_step_discriminants(request: TwoStepRequest):
    """d1, d2, d3 and the discriminant-test verdict"""
    logger.info(f"POST /two-step/discriminants - alpha={request.alpha} beta={request.beta} x={request.x}")
    try:
        params = TwoStepParams.from_values(
            Dual.parse(request.alpha).exact, Dual.parse(request.beta).exact, Dual.parse(request.x).exact
        )
        verdict = two_step.check_paper_mode(params).value
    except (DomainError, StructuralError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    d1, d2, d3 = params.residuals
    return DiscriminantsOut(d1=to_json_number(d1), d2=to_json_number(d2), d3=to_json_number(d3), paper_mode=verdict)

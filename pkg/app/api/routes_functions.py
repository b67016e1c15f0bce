import logging
from typing import List, Literal, Optional

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel

from app.core.config import settings
from app.core.errors import AuxBoundError, BoundNotEstablishedError, DomainError, ModeError
from app.models import AuxFunction, StepFunction
from app.services import condition_engine, func_model, rho
from app.services.function_io import FunctionSpec, spec_to_function
from app.services.reporting import CertificateOut, QuadraticPieceOut, RatioOut, format_number, to_json_number

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/functions", tags=["functions"])


class FunctionRequest(BaseModel):
    function: FunctionSpec


class VerifyRequest(FunctionRequest):
    mode: Optional[Literal["exact", "numeric"]] = None
    grid: int = settings.NUMERIC_GRID_SIZE
    tol: float = settings.NUMERIC_TOL


class RhoRequest(FunctionRequest):
    require_feasible: bool = True


class ValidateResponse(BaseModel):
    ok: bool
    violations: List[str]


class DecomposeResponse(BaseModel):
    pieces: List[QuadraticPieceOut]


def _function(request: FunctionRequest) -> AuxFunction:
    try:
        return spec_to_function(request.function)
    except DomainError as e:
        raise HTTPException(status_code=422, detail=str(e))


def _valid_function(request: FunctionRequest) -> AuxFunction:
    h = _function(request)
    violations = func_model.validate(h)
    if violations:
        raise HTTPException(status_code=422, detail={"violations": violations})
    return h


@router.post("/validate", response_model=ValidateResponse)
def validate_function(request: FunctionRequest):
    """Report every invariant violation"""
    h = _function(request)
    violations = func_model.validate(h)
    logger.info(f"POST /functions/validate - type={h.kind.value} violations={len(violations)}")
    return ValidateResponse(ok=not violations, violations=violations)


@router.post("/verify", response_model=CertificateOut)
def verify_function(request: VerifyRequest):
    """Feasibility certificate, exact or numeric"""
    h = _valid_function(request)
    logger.info(f"POST /functions/verify - type={h.kind.value} mode={request.mode}")
    try:
        if request.mode == "exact":
            cert = condition_engine.check_feasible_exact(h)
        elif request.mode == "numeric":
            cert = condition_engine.check_feasible_numeric(h, grid_size=request.grid, tol=request.tol)
        else:
            cert = condition_engine.check_feasible(h)
    except (ModeError, DomainError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    except AuxBoundError as e:
        logger.error(f"Verification failed: {e}")
        raise HTTPException(status_code=500, detail=str(e))
    return CertificateOut.from_certificate(cert)


@router.post("/rho", response_model=RatioOut)
def rho_of_function(request: RhoRequest):
    """ρ* = 1 + 1/(1 + ∫h), refused for infeasible h unless require_feasible is off"""
    h = _valid_function(request)
    logger.info(f"POST /functions/rho - type={h.kind.value} require_feasible={request.require_feasible}")
    try:
        result = rho.rho_star(h, require_feasible=request.require_feasible)
    except BoundNotEstablishedError as e:
        raise HTTPException(
            status_code=422,
            detail={"error": "bound not established", "witness": format_number(e.witness, 12)},
        )
    except AuxBoundError as e:
        logger.error(f"rho failed: {e}")
        raise HTTPException(status_code=500, detail=str(e))
    return RatioOut.from_result(result)


@router.post("/decompose", response_model=DecomposeResponse)
def decompose_function(request: FunctionRequest):
    """Quadratic pieces of G for a step or constant function"""
    h = _valid_function(request)
    try:
        step: StepFunction = func_model.as_step_function(h)
    except ModeError as e:
        raise HTTPException(status_code=422, detail=str(e))
    logger.info(f"POST /functions/decompose - pieces={step.num_pieces}")

    return DecomposeResponse(
        pieces=[
            QuadraticPieceOut(
                left=to_json_number(p.left),
                right=to_json_number(p.right),
                a=to_json_number(p.a),
                b=to_json_number(p.b),
                c=to_json_number(p.c),
                worst_z=to_json_number(z),
                margin=to_json_number(margin),
            )
            for p in condition_engine.decompose(step)
            for z, margin in [p.maximum()]
        ]
    )

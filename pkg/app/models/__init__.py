from app.models.functions import (
    AuxFunction,
    Constant,
    Dual,
    FunctionKind,
    Number,
    ReferenceTV,
    StepFunction,
    paper_h,
    reference_tv,
)
from app.models.certificate import ArithmeticMode, FeasibilityCertificate, PieceBound, QuadraticPiece, Verdict
from app.models.two_step import PaperModeVerdict, TwoStepParams
from app.models.results import BreakpointMode, CutRecord, OptimizeConfig, OptimizeResult, RatioResult

__all__ = [
    "AuxFunction",
    "Constant",
    "Dual",
    "FunctionKind",
    "Number",
    "ReferenceTV",
    "StepFunction",
    "paper_h",
    "reference_tv",
    "ArithmeticMode",
    "FeasibilityCertificate",
    "PieceBound",
    "QuadraticPiece",
    "Verdict",
    "PaperModeVerdict",
    "TwoStepParams",
    "BreakpointMode",
    "CutRecord",
    "OptimizeConfig",
    "OptimizeResult",
    "RatioResult",
]

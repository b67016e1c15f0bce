import enum
from dataclasses import dataclass
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings
from app.models.certificate import FeasibilityCertificate
from app.models.functions import Number, StepFunction


@dataclass(frozen=True)
class RatioResult:
    rho: Number
    integral_h: Number
    feasibility: Optional[FeasibilityCertificate] = None


class BreakpointMode(str, enum.Enum):
    UNIFORM = "uniform"
    REFINE = "refine"


class OptimizeConfig(BaseModel):
    """Knobs of the cutting-plane optimizer"""

    model_config = ConfigDict(frozen=True)

    num_pieces: int = Field(ge=1)
    breakpoint_mode: BreakpointMode = BreakpointMode.UNIFORM
    initial_z_cuts: int = Field(default_factory=lambda: settings.OPT_INITIAL_Z_CUTS, ge=2)
    max_rounds: int = Field(default_factory=lambda: settings.OPT_MAX_ROUNDS, ge=1)
    feasibility_shrink: float = Field(default_factory=lambda: settings.OPT_FEASIBILITY_SHRINK, gt=0, lt=1)
    lp_tolerance: float = Field(default_factory=lambda: settings.OPT_LP_TOLERANCE, gt=0)
    round_digits: int = Field(default_factory=lambda: settings.OPT_ROUND_DIGITS, ge=1)
    refine_sweeps: int = Field(default_factory=lambda: settings.OPT_REFINE_SWEEPS, ge=1)
    refine_iterations: int = Field(default_factory=lambda: settings.OPT_REFINE_ITERATIONS, ge=1)


@dataclass(frozen=True)
class CutRecord:
    round: int
    z: Number
    violation: Number
    iterate: StepFunction


@dataclass(frozen=True)
class OptimizeResult:
    h: StepFunction
    rho: Number
    integral_h: Number
    rounds: int
    cuts_used: Tuple[float, ...]
    certificate: FeasibilityCertificate
    cut_log: Tuple[CutRecord, ...] = ()

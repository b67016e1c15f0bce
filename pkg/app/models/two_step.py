import enum
from dataclasses import dataclass
from typing import Any, Tuple

from app.models.functions import StepFunction, Dual


class PaperModeVerdict(str, enum.Enum):
    FEASIBLE = "feasible"
    NOT_PROVEN = "not-proven"


def discriminant_triple(alpha: Any, beta: Any, x: Any) -> Tuple[Any, Any, Any]:
    """
    Discriminants of the three non-trivial quadratics of the two-step h.

    Works for any numeric type closed under + and * (Fraction, float, mpf).
    """
    integral = x * alpha + (1 - x) * beta
    d1 = (x * alpha) ** 2 + 8 * alpha * (x * alpha - x)
    d2 = integral**2 + 8 * alpha * (integral - 1)
    d3 = (-x * alpha + (x + 1) * beta) ** 2 + 8 * beta * (integral - 1)
    return d1, d2, d3


@dataclass(frozen=True)
class TwoStepParams:
    """α on [0, x), β on [x, 1], with the discriminants as residuals"""

    alpha: Any
    beta: Any
    x: Any
    residual1: Any
    residual2: Any
    residual3: Any

    @classmethod
    def from_values(cls, alpha: Any, beta: Any, x: Any) -> "TwoStepParams":
        d1, d2, d3 = discriminant_triple(alpha, beta, x)
        return cls(alpha=alpha, beta=beta, x=x, residual1=d1, residual2=d2, residual3=d3)

    @property
    def residuals(self) -> Tuple[Any, Any, Any]:
        return self.residual1, self.residual2, self.residual3

    def to_step_function(self) -> StepFunction:
        # floats (solver output) are quantised to their shortest decimal text
        def dual(v: Any) -> Dual:
            return Dual.parse(repr(v) if isinstance(v, float) else v)

        return StepFunction(breakpoints=(dual(self.x),), values=(dual(self.alpha), dual(self.beta)))

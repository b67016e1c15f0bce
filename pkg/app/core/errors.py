"""
Exception hierarchy shared by services, the CLI and the HTTP API.

Every error raised on purpose derives from AuxBoundError so callers can map
the whole family to one exit code or status code.
"""
from typing import Any, Optional


class AuxBoundError(Exception):
    """Base class for all expected failures"""


class DomainError(AuxBoundError, ValueError):
    """Argument outside [0,1] or otherwise invalid function data"""


class ModeError(AuxBoundError):
    """Exact certification requested on data without a rational form"""


class StructuralError(AuxBoundError):
    """Two-step parameters violate the 1/α−1 < 1/β−1 < x case ordering"""


class NumericalError(AuxBoundError):
    """A root finder could not locate a valid root in its bracket"""


class PrecisionError(AuxBoundError):
    """Imaginary residue of a complex-radical expression exceeds its bound"""


class QuadratureError(AuxBoundError):
    """Adaptive quadrature hit its subdivision cap"""


class InternalError(AuxBoundError):
    """Solver failure that valid input cannot produce"""


class BoundNotEstablishedError(AuxBoundError):
    """ρ* requested for an h that fails the condition"""

    def __init__(self, message: str, witness: Any = None, margin: Any = None):
        super().__init__(message)
        self.witness = witness
        self.margin = margin


class ConvergenceError(AuxBoundError):
    """Cutting-plane loop ran out of rounds"""

    def __init__(self, message: str, last_iterate: Any = None, rounds: int = 0):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.rounds = rounds


class FunctionSpecError(AuxBoundError):
    """Malformed function-spec JSON"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self) -> str:
        base = super().__str__()
        if self.line is not None:
            return f"{base} (line {self.line}, column {self.column})"
        return base

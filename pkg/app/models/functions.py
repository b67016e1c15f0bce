"""
Auxiliary functions h:[0,1]→[0,1].

Numbers are kept in dual form: the 64-bit float used for fast evaluation and
the exact rational parsed from decimal text. Values built from a bare float
have no exact form and cannot be certified exactly.
"""
import enum
from bisect import bisect_right
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import ClassVar, List, Optional, Sequence, Tuple, Union

from app.core.errors import DomainError

Number = Union[Fraction, float]
RawNumber = Union[str, Decimal, int, Fraction, float]


class FunctionKind(str, enum.Enum):
    STEP = "step"
    CONSTANT = "constant"
    REFERENCE_TV = "reference_tv"


@dataclass(frozen=True)
class Dual:
    value: float
    exact: Optional[Fraction] = None

    @classmethod
    def parse(cls, raw: RawNumber) -> "Dual":
        """
        Build a dual number.

        Decimal text, Decimal, int and Fraction inputs are converted to exact
        rationals without a float round-trip ("0.971239" -> 971239/1000000).
        Fraction text "p/q" is accepted as well. Floats carry no exact form.
        """
        if isinstance(raw, bool):
            raise DomainError(f"Not a number: {raw!r}")
        if isinstance(raw, float):
            return cls(value=raw, exact=None)
        try:
            exact = Fraction(raw.strip() if isinstance(raw, str) else raw)
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise DomainError(f"Not a number: {raw!r}") from e
        return cls(value=float(exact), exact=exact)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def number(self, exact: bool) -> Number:
        if exact:
            if self.exact is None:
                raise DomainError(f"{self.value!r} has no exact form")
            return self.exact
        return self.value


@dataclass(frozen=True)
class StepFunction:
    """
    Piece i covers [b_i, b_{i+1}) with b_0 = 0 and b_{m+1} = 1; the last piece
    also contains σ = 1. Invariants are reported by validate(), not enforced
    here, so malformed input can still be inspected.
    """

    breakpoints: Tuple[Dual, ...]
    values: Tuple[Dual, ...]

    kind: ClassVar[FunctionKind] = FunctionKind.STEP

    @classmethod
    def of(cls, breakpoints: Sequence[RawNumber], values: Sequence[RawNumber]) -> "StepFunction":
        return cls(
            breakpoints=tuple(Dual.parse(b) for b in breakpoints),
            values=tuple(Dual.parse(v) for v in values),
        )

    @property
    def num_pieces(self) -> int:
        return len(self.values)

    @property
    def is_exact(self) -> bool:
        return all(d.is_exact for d in self.breakpoints) and all(d.is_exact for d in self.values)

    def edges(self, exact: bool) -> List[Number]:
        """Piece boundaries [0, b_1, ..., b_m, 1]"""
        zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
        return [zero, *(b.number(exact) for b in self.breakpoints), one]

    def piece_values(self, exact: bool) -> List[Number]:
        return [v.number(exact) for v in self.values]

    def piece_index(self, sigma: Number) -> int:
        if isinstance(sigma, Fraction) and all(b.is_exact for b in self.breakpoints):
            keys = [b.exact for b in self.breakpoints]
        else:
            keys = [b.value for b in self.breakpoints]
        return bisect_right(keys, sigma)


@dataclass(frozen=True)
class Constant:
    value: Dual

    kind: ClassVar[FunctionKind] = FunctionKind.CONSTANT

    @classmethod
    def of(cls, value: RawNumber) -> "Constant":
        return cls(value=Dual.parse(value))


@dataclass(frozen=True)
class ReferenceTV:
    """σ ↦ 4/(4+σ)"""

    kind: ClassVar[FunctionKind] = FunctionKind.REFERENCE_TV

    @staticmethod
    def at(sigma: float) -> float:
        return 4.0 / (4.0 + sigma)


AuxFunction = Union[StepFunction, Constant, ReferenceTV]

TWO_STEP_ALPHA = "0.971239"
TWO_STEP_BETA = "0.873362"
TWO_STEP_X = "0.236901"


def paper_h() -> StepFunction:
    """The two-step h with value α on [0, x) and β on [x, 1]"""
    return StepFunction.of([TWO_STEP_X], [TWO_STEP_ALPHA, TWO_STEP_BETA])


def reference_tv() -> ReferenceTV:
    return ReferenceTV()

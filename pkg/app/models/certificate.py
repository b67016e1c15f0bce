import enum
from dataclasses import dataclass
from typing import Optional, Tuple

from app.models.functions import Number


class Verdict(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


class ArithmeticMode(str, enum.Enum):
    FLOAT = "float"
    EXACT = "exact"


@dataclass(frozen=True)
class QuadraticPiece:
    """G(z) = a·z² + b·z + c on [left, right]"""

    left: Number
    right: Number
    a: Number
    b: Number
    c: Number

    def value(self, z: Number) -> Number:
        return (self.a * z + self.b) * z + self.c

    def slope(self, z: Number) -> Number:
        return 2 * self.a * z + self.b

    def maximum(self) -> Tuple[Number, Number]:
        """
        Exact maximiser of the quadratic over [left, right].

        Linear and convex pieces peak at an endpoint; a concave piece also
        needs its vertex when the vertex is strictly interior. Ties go to the
        smaller z.
        """
        candidates = [self.left, self.right]
        if self.a < 0:
            vertex = -self.b / (2 * self.a)
            if self.left < vertex < self.right:
                candidates.append(vertex)

        best_z, best_value = None, None
        for z in sorted(candidates):
            value = self.value(z)
            if best_value is None or value > best_value:
                best_z, best_value = z, value
        return best_z, best_value


@dataclass(frozen=True)
class PieceBound:
    z: Number
    margin: Number


@dataclass(frozen=True)
class FeasibilityCertificate:
    verdict: Verdict
    mode: ArithmeticMode
    worst_z: Number
    worst_margin: Number
    pieces: Tuple[QuadraticPiece, ...] = ()
    piece_bounds: Tuple[PieceBound, ...] = ()
    witness: Optional[Number] = None

    @property
    def feasible(self) -> bool:
        return self.verdict == Verdict.FEASIBLE

"""
Sample h and G on a uniform grid for re-drawing the comparison of the
two-step h against the reference 4/(4+σ).
"""
import csv
import io
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.core.errors import DomainError
from app.models import AuxFunction
from app.services.condition_engine import condition_values
from app.services.func_model import evaluate
from app.services.reporting import format_number

Row = Tuple[float, float]

H_HEADER = ("sigma", "value")
G_HEADER = ("z", "G")


def _grid(samples: int) -> np.ndarray:
    if samples < 2:
        raise DomainError(f"samples={samples} must be at least 2")
    return np.linspace(0.0, 1.0, samples)


def sample_function(h: AuxFunction, samples: int) -> List[Row]:
    return [(float(s), evaluate(h, float(s))) for s in _grid(samples)]


def sample_condition(h: AuxFunction, samples: int) -> List[Row]:
    zs = _grid(samples)
    return [(float(z), float(g)) for z, g in zip(zs, condition_values(h, zs))]


def render_csv(rows: Sequence[Row], header: Sequence[str], digits: Optional[int] = None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for x, y in rows:
        writer.writerow((format_number(x, digits), format_number(y, digits)))
    return buffer.getvalue()

"""Golden-section search for the maximum of a unimodal function."""
import math
from typing import Callable, Tuple

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def golden_section_max(f: Callable[[float], float], a: float, b: float, iterations: int) -> Tuple[float, float]:
    """
    Maximise f on [a, b] with a fixed number of golden-section steps.

    The best point seen is returned, so a bracket endpoint never wins by
    default and ties keep the earlier (smaller) abscissa.

    Returns:
        (x, f(x)) of the best evaluated point
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    best = (c, yc) if yc >= yd else (d, yd)

    for _ in range(iterations):
        if yc >= yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
            if yc > best[1] or (yc == best[1] and c < best[0]):
                best = (c, yc)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
            if yd > best[1]:
                best = (d, yd)

    return best

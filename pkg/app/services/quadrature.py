"""Adaptive Simpson quadrature with a hard cap on subdivisions."""
import logging
from typing import Callable, Optional

from app.core.config import settings
from app.core.errors import QuadratureError

logger = logging.getLogger(__name__)


def _simpson(a: float, b: float, fa: float, fm: float, fb: float) -> float:
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def integrate_adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: Optional[float] = None,
    max_intervals: Optional[int] = None,
) -> float:
    """
    Adaptive Simpson's rule.

    Subintervals are split until the Richardson error estimate of each one
    is below its share of the absolute tolerance.

    Args:
        f: Integrand
        a: Lower bound
        b: Upper bound
        tol: Absolute error tolerance (default QUADRATURE_TOL)
        max_intervals: Subdivision cap (default QUADRATURE_MAX_INTERVALS)

    Returns:
        Approximation of the integral

    Raises:
        QuadratureError: If the cap is reached before the tolerance is met
    """
    tol = settings.QUADRATURE_TOL if tol is None else tol
    max_intervals = settings.QUADRATURE_MAX_INTERVALS if max_intervals is None else max_intervals

    if a == b:
        return 0.0
    if a > b:
        return -integrate_adaptive_simpson(f, b, a, tol, max_intervals)

    fa, fb = f(a), f(b)
    fm = f((a + b) / 2.0)
    stack = [(a, b, fa, fm, fb, _simpson(a, b, fa, fm, fb), tol)]
    intervals = 1
    total = 0.0

    while stack:
        lo, hi, flo, fmid, fhi, whole, eps = stack.pop()
        mid = (lo + hi) / 2.0
        flm = f((lo + mid) / 2.0)
        frm = f((mid + hi) / 2.0)
        left = _simpson(lo, mid, flo, flm, fmid)
        right = _simpson(mid, hi, fmid, frm, fhi)
        delta = left + right - whole

        if abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
            continue

        intervals += 1
        if intervals > max_intervals:
            raise QuadratureError(f"adaptive Simpson exceeded {max_intervals} intervals on [{a}, {b}]")
        stack.append((lo, mid, flo, flm, fmid, left, eps / 2.0))
        stack.append((mid, hi, fmid, frm, fhi, right, eps / 2.0))

    return total

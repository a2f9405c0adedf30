"""Golden-section scalar minimization."""

from __future__ import annotations

import math

import numpy as np

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class BracketError(ValueError):
    pass


def minimize_scalar(f, bracket, tol=1e-10, max_iter=500):
    """Minimize a unimodal ``f`` on ``bracket = (lo, hi)`` by golden section.

    Returns ``(x_min, f_min)`` as floats. Abscissae are carried in
    ``numpy.longdouble`` and passed to ``f`` as such, so an ``f`` written with
    plain arithmetic is compared in extended precision. Near a quadratic
    minimum, float64 values cannot separate points closer than about
    sqrt(eps) relative, which is coarser than the tolerances used here.

    Every evaluation lies inside [lo, hi]. On an exact tie the left
    sub-interval is kept.
    """
    lo, hi = bracket
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise BracketError(f"invalid bracket ({lo!r}, {hi!r})")
    if tol <= 0:
        raise ValueError("tol must be > 0")

    ld = np.longdouble
    a, b = ld(lo), ld(hi)
    r = ld(_INV_PHI)
    x1 = b - r * (b - a)
    x2 = a + r * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - r * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + r * (b - a)
            f2 = f(x2)
    if f1 <= f2:
        return float(x1), float(f1)
    return float(x2), float(f2)

"""Goodness-of-fit statistics."""

from __future__ import annotations

import numpy as np


class EmptySampleError(ValueError):
    pass


def ks_statistic(samples, cdf) -> float:
    """Kolmogorov-Smirnov distance sup |F_n - F| for sorted ``samples``.

    ``cdf`` is called once on the whole sample array. Unsorted input is
    sorted first.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise EmptySampleError("ks_statistic needs at least one sample")
    if np.any(np.diff(x) < 0):
        x = np.sort(x)
    n = x.size
    fx = np.asarray(cdf(x), dtype=float)
    upper = np.arange(1, n + 1) / n - fx
    lower = fx - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def ks_critical_value(n: int, confidence: float = 0.999) -> float:
    """Asymptotic Kolmogorov quantile divided by sqrt(n).

    1.95 / sqrt(n) at 0.999 (from sqrt(-ln((1 - c) / 2) / 2)).
    """
    return float(np.sqrt(-0.5 * np.log((1.0 - confidence) / 2.0)) / np.sqrt(n))

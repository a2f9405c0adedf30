"""Numerical kernel: quadrature, erf, golden-section search, seeded normals, KS."""

from .optimize import BracketError, minimize_scalar
from .quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureError,
    QuadratureSpec,
    integrate,
    integrate_with_error,
)
from .rng import RandomStream, gaussian_block, gaussian_samples, uniform_samples
from .special import erf, erf_array, erfc
from .stats import EmptySampleError, ks_critical_value, ks_statistic

__all__ = [
    "BracketError",
    "DEFAULT_QUADRATURE",
    "EmptySampleError",
    "QuadratureError",
    "QuadratureSpec",
    "RandomStream",
    "erf",
    "erf_array",
    "erfc",
    "gaussian_block",
    "gaussian_samples",
    "integrate",
    "integrate_with_error",
    "ks_critical_value",
    "ks_statistic",
    "minimize_scalar",
    "uniform_samples",
]

"""Gaussian spread-charge model of the electron.

The elementary charge is smeared with density F(rho) proportional to
exp(-(rho/lambda_o)^2), which equals the squared ground-state amplitude of an
isotropic 3D oscillator with length lambda_o. This module evaluates the
density, the averaged self-potential (closed erf form and an independent
shell-construction Poisson solve), the self-interaction energy (nested
quadrature and closed form) and its comparison with the vacuum kinetic
energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, erf, integrate
from .units import UnitSystem, atomic_units, oscillation_length
from .vacuum import zpf_kinetic_energy_closed

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class GaussianCloud:
    lambda_o: float
    total_charge: float = 1.0
    units: UnitSystem = field(default_factory=atomic_units)

    def __post_init__(self):
        if not self.lambda_o > 0:
            raise ValueError(f"lambda_o must be > 0, got {self.lambda_o!r}")

    @classmethod
    def from_units(cls, u: UnitSystem | None = None) -> "GaussianCloud":
        u = u or atomic_units()
        return cls(lambda_o=oscillation_length(u), total_charge=u.charge, units=u)


@dataclass(frozen=True)
class RadialProfile:
    """Values on a strictly increasing radial grid with cubic-spline lookup."""

    radii: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if radii.shape != values.shape or radii.ndim != 1:
            raise ValueError("radii and values must be 1-D and of equal length")
        if np.any(np.diff(radii) <= 0):
            raise ValueError("radii must be strictly increasing")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)

    def __call__(self, rho):
        return CubicSpline(self.radii, self.values)(rho)

    def to_rows(self):
        return list(zip(self.radii.tolist(), self.values.tolist()))


@dataclass(frozen=True)
class EnergyBudget:
    e_kinetic: float
    e_potential: float
    ratio: float
    rel_difference: float


def log_grid(cloud: GaussianCloud, lo=0.01, hi=20.0, n=200) -> np.ndarray:
    """``n`` log-spaced radii between ``lo`` and ``hi`` times lambda_o."""
    return cloud.lambda_o * np.geomspace(lo, hi, n)


def charge_density(cloud: GaussianCloud, rho):
    """Unit-normalized density (pi lambda_o^2)^(-3/2) exp(-(rho/lambda_o)^2).

    At the default lambda_o = sqrt(3/2) hbar/(m C) the prefactor equals
    (2/(3 pi))^(3/2) (m C/hbar)^3.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ValueError("rho must be >= 0")
    lam = cloud.lambda_o
    out = (math.pi * lam * lam) ** -1.5 * np.exp(-((rho / lam) ** 2))
    return out if out.ndim else float(out)


def density_peak_printed(u: UnitSystem) -> float:
    """(2/(3 pi))^(3/2) (m C / hbar)^3, the peak density in terms of the constants."""
    return (2.0 / (3.0 * math.pi)) ** 1.5 * (u.mass * u.light_speed / u.hbar) ** 3


def oscillator_ground_amplitude(cloud: GaussianCloud, rho):
    """(lambda_o sqrt(pi))^(-3/2) exp(-rho^2 / (2 lambda_o^2))."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ValueError("rho must be >= 0")
    lam = cloud.lambda_o
    out = (lam * SQRT_PI) ** -1.5 * np.exp(-(rho * rho) / (2.0 * lam * lam))
    return out if out.ndim else float(out)


def self_potential(cloud: GaussianCloud, rho: float) -> float:
    """Averaged self-potential -(2e/(sqrt(pi) rho)) int_0^(rho/lambda_o) exp(-x^2) dx.

    The incomplete integral is (sqrt(pi)/2) erf(rho/lambda_o), so this is
    -e erf(rho/lambda_o)/rho. At rho = 0 the removable singularity is
    replaced by its limit -2e/(sqrt(pi) lambda_o).
    """
    if rho < 0:
        raise ValueError("rho must be >= 0")
    e, lam = cloud.total_charge, cloud.lambda_o
    if rho == 0.0:
        return -2.0 * e / (SQRT_PI * lam)
    return -e * erf(rho / lam) / rho


def self_potential_via_poisson(
    cloud: GaussianCloud, grid=None, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> RadialProfile:
    """Solve the radial Poisson equation with source -4 pi e F by shell sums.

    V(r) = -e [Q(r)/r + int_r^inf 4 pi s F(s) ds], with Q(r) the enclosed
    fraction int_0^r 4 pi s^2 F(s) ds. Both integrals are accumulated
    segment by segment over the grid by adaptive quadrature of F itself,
    so no erf enters this route.
    """
    lam = cloud.lambda_o
    radii = log_grid(cloud) if grid is None else np.asarray(grid, dtype=float)
    if radii[0] > 0.01 * lam * (1 + 1e-12) or radii[-1] < 20.0 * lam * (1 - 1e-12):
        raise ValueError("grid must span at least [0.01, 20] lambda_o")
    if np.any(np.diff(radii) <= 0):
        raise ValueError("grid must be strictly increasing")

    def shell_charge(s):
        return 4.0 * math.pi * s * s * charge_density(cloud, s)

    def shell_potential(s):
        return 4.0 * math.pi * s * charge_density(cloud, s)

    edges = np.concatenate([[0.0], radii])
    enclosed = np.cumsum(
        [integrate(shell_charge, lo, hi, spec, vectorized=True) for lo, hi in zip(edges[:-1], edges[1:])]
    )
    segments = [
        integrate(shell_potential, lo, hi, spec, vectorized=True)
        for lo, hi in zip(radii[:-1], radii[1:])
    ]
    tail = integrate(shell_potential, radii[-1], math.inf, spec, vectorized=True)
    # exterior integral from r_k to infinity, summed from the outside in
    exterior = np.concatenate([np.cumsum(segments[::-1])[::-1], [0.0]]) + tail
    values = -cloud.total_charge * (enclosed / radii + exterior)
    return RadialProfile(radii, values)


def self_energy(cloud: GaussianCloud, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Self-interaction energy from the nested double integral.

    E_p = (2e/sqrt(pi)) (4 pi e / (pi sqrt(pi) lambda_o))
          int_0^inf exp(-u^2) u du int_0^u exp(-x^2) dx,
    with both levels done by adaptive quadrature.
    """
    e, lam = cloud.total_charge, cloud.lambda_o
    prefactor = (2.0 * e / SQRT_PI) * (4.0 * math.pi * e / (math.pi * SQRT_PI * lam))

    def inner(u):
        return integrate(lambda x: np.exp(-x * x), 0.0, u, spec, vectorized=True)

    def outer(u):
        return math.exp(-u * u) * u * inner(u)

    return prefactor * integrate(outer, 0.0, math.inf, spec)


def self_energy_closed(cloud: GaussianCloud) -> float:
    """sqrt(2/pi) e^2 / lambda_o."""
    return math.sqrt(2.0 / math.pi) * cloud.total_charge**2 / cloud.lambda_o


def self_energy_closed_rest_form(u: UnitSystem) -> float:
    """(2/sqrt(3 pi)) alpha m C^2; equal to :func:`self_energy_closed` at the default lambda_o."""
    return (2.0 / math.sqrt(3.0 * math.pi)) * (u.charge**2 / (u.light_speed * u.hbar)) * u.rest_energy


def energy_budget_compare(u: UnitSystem | None = None) -> EnergyBudget:
    """Vacuum kinetic energy against the self-interaction energy.

    The two are close but not equal: their ratio is sqrt(pi/3).
    """
    u = u or atomic_units()
    e_k = zpf_kinetic_energy_closed(u)
    e_p = self_energy_closed(GaussianCloud.from_units(u))
    return EnergyBudget(
        e_kinetic=e_k,
        e_potential=e_p,
        ratio=e_p / e_k,
        rel_difference=abs(e_p - e_k) / e_p,
    )

"""Zero-point-field kinetic energy picked up by the spread electron."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, integrate
from .units import UnitSystem, atomic_units, zpf_cutoff


@dataclass(frozen=True)
class SpectralCutoffs:
    omega_min: float
    omega_max: float

    def __post_init__(self):
        # the omega-linear integrand diverges without a finite upper cutoff
        if not (0.0 <= self.omega_min <= self.omega_max < math.inf):
            raise ValueError(
                f"need 0 <= omega_min <= omega_max, got {self.omega_min}, {self.omega_max}"
            )

    @classmethod
    def default(cls, u: UnitSystem) -> "SpectralCutoffs":
        """omega_min = 0 and omega_max = 2 m C^2 / hbar."""
        return cls(0.0, zpf_cutoff(u))


@dataclass(frozen=True)
class ZpfResult:
    e_kinetic: float
    cutoff_used: SpectralCutoffs
    closed_form: float
    rel_deviation: float
    ratio_to_rest_energy: float


def spectral_prefactor(u: UnitSystem) -> float:
    """(e^2/pi) (m C/hbar) (hbar/(m C^2))^2, the weight in front of int omega d omega."""
    return (u.charge**2 / math.pi) * (u.mass * u.light_speed / u.hbar) * (
        u.hbar / (u.mass * u.light_speed**2)
    ) ** 2


def zpf_kinetic_energy(
    u: UnitSystem | None = None,
    cutoffs: SpectralCutoffs | None = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Averaged kinetic energy from the fluctuating vacuum, by quadrature over omega."""
    u = u or atomic_units()
    cutoffs = cutoffs or SpectralCutoffs.default(u)
    integral = integrate(lambda w: w, cutoffs.omega_min, cutoffs.omega_max, spec, vectorized=True)
    return spectral_prefactor(u) * integral


def zpf_kinetic_energy_closed(u: UnitSystem | None = None) -> float:
    """(2/pi) alpha m C^2."""
    u = u or atomic_units()
    return (2.0 / math.pi) * (u.charge**2 / (u.light_speed * u.hbar)) * u.rest_energy


def zpf_report(
    u: UnitSystem | None = None,
    cutoffs: SpectralCutoffs | None = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> ZpfResult:
    u = u or atomic_units()
    cutoffs = cutoffs or SpectralCutoffs.default(u)
    value = zpf_kinetic_energy(u, cutoffs, spec)
    closed = zpf_kinetic_energy_closed(u)
    return ZpfResult(
        e_kinetic=value,
        cutoff_used=cutoffs,
        closed_form=closed,
        rel_deviation=abs(value - closed) / abs(closed),
        ratio_to_rest_energy=value / u.rest_energy,
    )

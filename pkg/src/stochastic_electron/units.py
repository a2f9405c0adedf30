"""Unit system and physical constants.

Everything in the package runs in Gaussian-convention atomic units
(hbar = m = e = 1, C = 1/alpha). Energies are in hartree, lengths in bohr,
times in atomic time units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

#: CODATA 2018 inverse fine-structure constant.
INVERSE_ALPHA = 137.035999084

UNITS_LABEL = "atomic"


class UnitSystemError(ValueError):
    pass


@dataclass(frozen=True)
class UnitSystem:
    """Values of hbar, m, e and C, with the derived fine-structure constant.

    ``alpha`` may be passed explicitly; it must then agree with
    ``charge**2 / (hbar * light_speed)`` to 1e-14 relative.
    """

    hbar: float = 1.0
    mass: float = 1.0
    charge: float = 1.0
    light_speed: float = INVERSE_ALPHA
    alpha: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        for name in ("hbar", "mass", "charge", "light_speed"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise UnitSystemError(f"{name} must be finite and > 0, got {value!r}")
        derived = self.charge**2 / (self.hbar * self.light_speed)
        if self.alpha is None:
            object.__setattr__(self, "alpha", derived)
        elif not abs(self.alpha - derived) <= 1e-14 * derived:
            raise UnitSystemError(
                f"alpha={self.alpha!r} inconsistent with e^2/(hbar C)={derived!r}"
            )

    @property
    def rest_energy(self) -> float:
        """m C^2."""
        return self.mass * self.light_speed**2

    @property
    def compton_length(self) -> float:
        """Reduced Compton wavelength hbar / (m C)."""
        return self.hbar / (self.mass * self.light_speed)

    @property
    def bohr_radius(self) -> float:
        return self.hbar**2 / (self.mass * self.charge**2)

    @property
    def hartree(self) -> float:
        return self.mass * self.charge**4 / self.hbar**2

    def scaled(self, *, hbar=1.0, mass=1.0, charge=1.0, light_speed=1.0) -> "UnitSystem":
        """Return a copy with each constant multiplied by the given factor."""
        return UnitSystem(
            hbar=self.hbar * hbar,
            mass=self.mass * mass,
            charge=self.charge * charge,
            light_speed=self.light_speed * light_speed,
        )


def atomic_units() -> UnitSystem:
    return UnitSystem()


def oscillation_length(u: UnitSystem) -> float:
    """Spread length of the charge cloud, sqrt(3/2) * hbar / (m C)."""
    return math.sqrt(1.5) * u.compton_length


def zpf_cutoff(u: UnitSystem) -> float:
    """Default upper angular-frequency cutoff 2 m C^2 / hbar."""
    return 2.0 * u.rest_energy / u.hbar

"""Uncertainty-relation estimates for H-like ground states and angular momentum.

The ground-state energy is written from momentum and angular-momentum
dispersions saturating their uncertainty bounds, then minimized over the
orbital radius. The angular-momentum part assembles <L^2> from <L_z> = l hbar
and three Cartesian dispersions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numerics import minimize_scalar
from .units import UnitSystem, atomic_units

#: Radius printed next to the minimization, hbar^2/(2 m e^2); kept for reporting only.
PRINTED_RADIUS_NOTE = "printed r_o = hbar^2/(2 m e^2) disagrees with stationarity; a0/Z used"


@dataclass(frozen=True)
class VariationalResult:
    z: float
    r_opt: float
    e_opt: float
    p_r_dispersion: float
    l_dispersion_sum: float
    numeric_r_opt: float
    numeric_e_opt: float
    printed_r_opt: float


@dataclass(frozen=True)
class AngularMomentumReport:
    l: int
    lz_mean: float
    dx2: float
    dy2: float
    dz2: float
    l_square_paper: float
    l_square_closed: float
    l_square_standard: float
    branch: str
    inequalities_satisfied: tuple
    saturated: tuple
    literal_cyclic_satisfied: tuple


def _check_radius(r):
    if not r > 0:
        raise ValueError(f"radius must be > 0, got {r!r}")


def radial_momentum_dispersion(r: float, u: UnitSystem | None = None) -> float:
    """hbar^2/(4 r^2): the radial uncertainty bound saturated at <(dr)^2> = r^2."""
    _check_radius(r)
    u = u or atomic_units()
    return u.hbar**2 / (4.0 * r * r)


def ground_angular_components(u: UnitSystem | None = None) -> tuple[float, float, float]:
    """Three equal dispersions hbar^2/4 of the spherically symmetric ground state."""
    u = u or atomic_units()
    q = u.hbar**2 / 4.0
    return q, q, q


def ground_angular_dispersion_sum(u: UnitSystem | None = None) -> float:
    """3 hbar^2 / 4."""
    return sum(ground_angular_components(u))


def total_energy_general(p_r_mean, l_mean, r, p_r_disp, l_disp, z, u: UnitSystem | None = None) -> float:
    """Mean-plus-dispersion energy of an electron at radius r around charge Z e.

    (1/2m)[<P_r>^2 + <L>^2/r^2] + (1/2m)[<(dP_r)^2> + <(dL)^2>/r^2] - Z e^2/r,
    where <(dL)^2> is the sum of the three Cartesian dispersions.
    """
    _check_radius(r)
    u = u or atomic_units()
    two_m = 2.0 * u.mass
    mean_part = (p_r_mean**2 + l_mean**2 / r**2) / two_m
    spread_part = (p_r_disp + l_disp / r**2) / two_m
    return mean_part + spread_part - z * u.charge**2 / r


def energy_functional(r, z, u: UnitSystem | None = None):
    """hbar^2/(2 m r^2) - Z e^2 / r.

    Plain arithmetic only, so extended-precision ``r`` stays extended.
    """
    if not r > 0:
        raise ValueError(f"radius must be > 0, got {r!r}")
    u = u or atomic_units()
    return u.hbar**2 / (2.0 * u.mass * r * r) - z * u.charge**2 / r


def minimize_energy(z: float, u: UnitSystem | None = None, tol: float = 1e-12) -> VariationalResult:
    """Analytic and golden-section minima of :func:`energy_functional`.

    Stationarity gives r_o = hbar^2/(m Z e^2) = a0/Z and
    E = -m Z^2 e^4 / (2 hbar^2).
    """
    if z < 1:
        raise ValueError("z must be >= 1")
    u = u or atomic_units()
    r_opt = u.hbar**2 / (u.mass * z * u.charge**2)
    e_opt = -u.mass * z**2 * u.charge**4 / (2.0 * u.hbar**2)
    a0 = u.bohr_radius
    x_min, f_min = minimize_scalar(lambda r: energy_functional(r, z, u), (1e-3 * a0, 10.0 * a0), tol)
    return VariationalResult(
        z=z,
        r_opt=r_opt,
        e_opt=e_opt,
        p_r_dispersion=radial_momentum_dispersion(r_opt, u),
        l_dispersion_sum=ground_angular_dispersion_sum(u),
        numeric_r_opt=x_min,
        numeric_e_opt=f_min,
        printed_r_opt=u.hbar**2 / (2.0 * u.mass * u.charge**2),
    )


def dispersion_assignment(l: int, exact: bool = False):
    """(dLx^2, dLy^2, dLz^2) in units of hbar^2.

    l >= 1: (l/2, l/2, 1/4). l = 0 uses the ground-state assignment
    (1/4, 1/4, 1/4), not the l -> 0 limit of the general formula.
    ``exact=True`` returns Fractions.
    """
    if int(l) != l or l < 0:
        raise ValueError(f"l must be a nonnegative integer, got {l!r}")
    quarter = Fraction(1, 4)
    if l == 0:
        out = (quarter, quarter, quarter)
    else:
        out = (Fraction(l, 2), Fraction(l, 2), quarter)
    return out if exact else tuple(float(v) for v in out)


def _audit(dx2, dy2, dz2):
    # component uncertainty relations in hbar = 1 units:
    #   dx2 dy2 >= dz2/4, dy2 dz2 >= dx2/4, dz2 dx2 >= dy2/4
    pairs = ((dx2 * dy2, dz2 / 4), (dy2 * dz2, dx2 / 4), (dz2 * dx2, dy2 / 4))
    holds = tuple(lhs >= rhs for lhs, rhs in pairs)
    saturated = tuple(lhs == rhs for lhs, rhs in pairs)
    # the two cyclic relations as printed, without the hbar^2/4 factor
    literal = (dy2 * dz2 >= dx2, dz2 * dx2 >= dy2)
    return holds, saturated, literal


def l_square_report(l: int, u: UnitSystem | None = None) -> AngularMomentumReport:
    """Assemble <L^2> = (l hbar)^2 + dLx^2 + dLy^2 + dLz^2.

    For l >= 1 this equals hbar^2 (l + 1/2)^2. At l = 0 the ground-state
    branch gives 3 hbar^2/4 while the closed formula gives hbar^2/4; both
    are reported. The audit is done in exact rational arithmetic.
    """
    u = u or atomic_units()
    dx2, dy2, dz2 = dispersion_assignment(l, exact=True)
    assembled = Fraction(l) ** 2 + dx2 + dy2 + dz2
    closed = (Fraction(l) + Fraction(1, 2)) ** 2
    holds, saturated, literal = _audit(dx2, dy2, dz2)
    h2 = u.hbar**2
    return AngularMomentumReport(
        l=int(l),
        lz_mean=l * u.hbar,
        dx2=float(dx2) * h2,
        dy2=float(dy2) * h2,
        dz2=float(dz2) * h2,
        l_square_paper=float(assembled) * h2,
        l_square_closed=float(closed) * h2,
        l_square_standard=float(l * (l + 1)) * h2,
        branch="ground-state" if l == 0 else "general",
        inequalities_satisfied=holds,
        saturated=saturated,
        literal_cyclic_satisfied=literal,
    )

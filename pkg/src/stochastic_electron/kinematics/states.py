"""Analytic stationary states and their complex-action decomposition.

A state is written Psi = exp(i S1/hbar - S2/hbar). The real part S1 gives the
current velocity grad S1 / m, the imaginary part S2 = -hbar ln(|Psi| / B)
gives the osmotic velocity grad S2 / m. All gradients here are analytic.

Positions are arrays whose last axis is the spatial dimension of the state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..numerics import DEFAULT_QUADRATURE, QuadratureSpec, integrate
from ..units import UnitSystem, atomic_units

HYDROGEN = "hydrogen-1s"
HARMONIC = "harmonic-ground"
PLANE_WAVE = "plane-wave"
KINDS = (HYDROGEN, HARMONIC, PLANE_WAVE)


class ZeroAmplitudeError(ArithmeticError):
    pass


class NonNormalizableError(ValueError):
    pass


@dataclass(frozen=True)
class WaveState:
    """One of the supported analytic states.

    Use :func:`hydrogen_1s`, :func:`harmonic_ground` or :func:`plane_wave`
    rather than building this directly.
    """

    kind: str
    z: float = 1.0
    omega: float = 1.0
    k: float = 0.0
    dimensions: int = 3
    units: UnitSystem = field(default_factory=atomic_units)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown state kind {self.kind!r}")
        if self.kind == HYDROGEN and (self.dimensions != 3 or not self.z > 0):
            raise ValueError("hydrogen-1s needs dimensions=3 and z > 0")
        if self.kind == HARMONIC and (self.dimensions not in (1, 3) or not self.omega > 0):
            raise ValueError("harmonic-ground needs dimensions in (1, 3) and omega > 0")
        if self.kind == PLANE_WAVE and self.dimensions != 1:
            raise ValueError("plane-wave is one-dimensional")

    @property
    def normalizable(self) -> bool:
        return self.kind != PLANE_WAVE

    @property
    def length_scale(self) -> float:
        """a0/Z for hydrogen, lambda = sqrt(hbar/(m omega)) for the oscillator, 1/k for the plane wave."""
        u = self.units
        if self.kind == HYDROGEN:
            return u.bohr_radius / self.z
        if self.kind == HARMONIC:
            return math.sqrt(u.hbar / (u.mass * self.omega))
        return math.inf if self.k == 0 else 1.0 / abs(self.k)

    @property
    def energy(self) -> float:
        u = self.units
        if self.kind == HYDROGEN:
            return -0.5 * self.z**2 * u.hartree
        if self.kind == HARMONIC:
            return 0.5 * self.dimensions * u.hbar * self.omega
        return (u.hbar * self.k) ** 2 / (2.0 * u.mass)

    def _points(self, x):
        x = np.asarray(x, dtype=float)
        if self.dimensions == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
        if x.shape[-1] != self.dimensions:
            raise ValueError(f"positions need a trailing axis of length {self.dimensions}")
        return x

    def radius(self, x):
        return np.linalg.norm(self._points(x), axis=-1)

    def amplitude(self, x):
        """|Psi| at positions ``x`` (normalized to 1 for bound states)."""
        x = self._points(x)
        r = np.linalg.norm(x, axis=-1)
        if self.kind == HYDROGEN:
            a = self.length_scale
            return np.exp(-r / a) / math.sqrt(math.pi * a**3)
        if self.kind == HARMONIC:
            lam = self.length_scale
            d = self.dimensions
            return (math.pi * lam * lam) ** (-d / 4) * np.exp(-(r * r) / (2 * lam * lam))
        return np.ones_like(r)

    def density(self, x):
        return self.amplitude(x) ** 2

    def phase_action(self, x, t=0.0):
        """S1(x, t) = -E t (+ hbar k x for the plane wave)."""
        x = self._points(x)
        s1 = np.full(x.shape[:-1], -self.energy * t)
        if self.kind == PLANE_WAVE:
            s1 = s1 + self.units.hbar * self.k * x[..., 0]
        return s1

    def potential(self, x):
        """External potential energy: -Z e^2/r, m omega^2 r^2/2 or 0."""
        x = self._points(x)
        r = np.linalg.norm(x, axis=-1)
        u = self.units
        if self.kind == HYDROGEN:
            if np.any(r == 0):
                raise ValueError("Coulomb potential undefined at r = 0")
            return -self.z * u.charge**2 / r
        if self.kind == HARMONIC:
            return 0.5 * u.mass * self.omega**2 * r * r
        return np.zeros_like(r)

    def radial_cdf(self, r):
        """Born-rule probability of |x| <= r (bound states only)."""
        r = np.asarray(r, dtype=float)
        if self.kind == HYDROGEN:
            t = 2.0 * r / self.length_scale
            return -np.expm1(-t) - np.exp(-t) * (t + 0.5 * t * t)
        if self.kind == HARMONIC:
            from ..numerics import erf_array

            s = r / self.length_scale
            if self.dimensions == 1:
                return erf_array(s)
            return erf_array(s) - 2.0 / math.sqrt(math.pi) * s * np.exp(-s * s)
        raise NonNormalizableError("plane wave has no Born-rule distribution")


def hydrogen_1s(z: float = 1.0, units: UnitSystem | None = None) -> WaveState:
    return WaveState(HYDROGEN, z=z, dimensions=3, units=units or atomic_units())


def harmonic_ground(omega: float = 1.0, dimensions: int = 1, units: UnitSystem | None = None) -> WaveState:
    return WaveState(HARMONIC, omega=omega, dimensions=dimensions, units=units or atomic_units())


def plane_wave(k: float = 1.0, units: UnitSystem | None = None) -> WaveState:
    return WaveState(PLANE_WAVE, k=k, dimensions=1, units=units or atomic_units())


@dataclass(frozen=True)
class ComplexAction:
    """The pair (S1, S2) with normalization B, so that |Psi| = B exp(-S2/hbar).

    B is the amplitude at the origin, which puts S2(0) = 0.
    """

    state: WaveState
    norm_constant: float

    @property
    def hbar(self):
        return self.state.units.hbar

    def s1(self, x, t=0.0):
        return self.state.phase_action(x, t)

    def s2(self, x):
        st = self.state
        x = st._points(x)
        r = np.linalg.norm(x, axis=-1)
        if st.kind == HYDROGEN:
            return self.hbar * r / st.length_scale
        if st.kind == HARMONIC:
            return self.hbar * r * r / (2.0 * st.length_scale**2)
        return np.zeros_like(r)

    def s2_from_amplitude(self, x):
        """-hbar ln(|Psi|/B) straight from the amplitude (numeric check path)."""
        amp = self.state.amplitude(x)
        if np.any(amp <= 0):
            raise ZeroAmplitudeError("amplitude vanishes; S2 is undefined there")
        return -self.hbar * np.log(amp / self.norm_constant)

    def reconstruct_amplitude(self, x):
        return self.norm_constant * np.exp(-self.s2(x) / self.hbar)

    def grad_s1(self, x):
        st = self.state
        x = st._points(x)
        g = np.zeros_like(x)
        if st.kind == PLANE_WAVE:
            g[..., 0] = self.hbar * st.k
        return g

    def grad_s2(self, x):
        st = self.state
        x = st._points(x)
        if st.kind == HYDROGEN:
            r = np.linalg.norm(x, axis=-1, keepdims=True)
            if np.any(r == 0):
                raise ValueError("grad S2 is undefined at r = 0 for hydrogen")
            return self.hbar / st.length_scale * x / r
        if st.kind == HARMONIC:
            return self.hbar * x / st.length_scale**2
        return np.zeros_like(x)

    def laplacian_s2(self, x):
        st = self.state
        x = st._points(x)
        r = np.linalg.norm(x, axis=-1)
        if st.kind == HYDROGEN:
            if np.any(r == 0):
                raise ValueError("laplacian of S2 is undefined at r = 0 for hydrogen")
            return 2.0 * self.hbar / (st.length_scale * r)
        if st.kind == HARMONIC:
            return np.full(r.shape, st.dimensions * self.hbar / st.length_scale**2)
        return np.zeros_like(r)


def decompose_action(state: WaveState) -> ComplexAction:
    origin = np.zeros(state.dimensions)
    norm = float(state.amplitude(origin))
    if norm <= 0:
        raise ZeroAmplitudeError("amplitude vanishes at the reference point")
    return ComplexAction(state, norm)


@dataclass(frozen=True)
class VelocityField:
    """Current velocity grad S1/m and osmotic velocity grad S2/m.

    ``osmotic`` follows the grad S2 sign (outward for a bound state). The
    drift that enters the forward velocity is ``osmotic_drift = -osmotic``.
    """

    action: ComplexAction

    @property
    def mass(self):
        return self.action.state.units.mass

    def current(self, x):
        return self.action.grad_s1(x) / self.mass

    def osmotic(self, x):
        return self.action.grad_s2(x) / self.mass

    def osmotic_drift(self, x):
        return -self.osmotic(x)


def velocity_fields(state: WaveState) -> VelocityField:
    return VelocityField(decompose_action(state))


def forward_backward_velocities(state: WaveState, x):
    """(v_plus, v_minus) = current +/- osmotic_drift."""
    field_ = velocity_fields(state)
    current = field_.current(x)
    drift = field_.osmotic_drift(x)
    return current + drift, current - drift


HJ_VARIANTS = ("classical", "paper", "madelung")


def hamilton_jacobi_residual(state: WaveState, x, variant: str = "madelung"):
    """E minus the right-hand side of a Hamilton-Jacobi balance at ``x``.

    classical: (grad S1)^2/2m + U
    paper:     (grad S1)^2/2m + (grad S2)^2/2m + U
    madelung:  (grad S1)^2/2m + U + Q, with the quantum potential
               Q = -(grad S2)^2/2m + (hbar/2m) lap S2 = -(hbar^2/2m) lap|Psi| / |Psi|.

    The madelung residual vanishes pointwise for eigenstates; the paper form
    only vanishes on Born-density average.
    """
    if variant not in HJ_VARIANTS:
        raise ValueError(f"variant must be one of {HJ_VARIANTS}")
    action = decompose_action(state)
    m = state.units.mass
    g1 = action.grad_s1(x)
    rhs = np.sum(g1 * g1, axis=-1) / (2 * m) + state.potential(x)
    if variant != "classical":
        g2 = action.grad_s2(x)
        kinetic2 = np.sum(g2 * g2, axis=-1) / (2 * m)
        if variant == "paper":
            rhs = rhs + kinetic2
        else:
            rhs = rhs - kinetic2 + action.hbar / (2 * m) * action.laplacian_s2(x)
    return state.energy - rhs


def expectation(state: WaveState, fn, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Born-density average of a radial function ``fn(r)`` by quadrature.

    ``fn`` receives scalar radii; for 1D states the integral runs over the
    whole line using evenness.
    """
    if not state.normalizable:
        raise NonNormalizableError("plane wave cannot be averaged")
    d = state.dimensions
    shell = 2.0 if d == 1 else 4.0 * math.pi

    def integrand(r):
        point = np.zeros(d)
        point[0] = r
        measure = shell * (r ** (d - 1) if d > 1 else 1.0)
        return measure * float(state.density(point)) * fn(r)

    scale = state.length_scale
    # split at a few length scales so the cusp/peak region is resolved first
    return integrate(integrand, 0.0, 8 * scale, spec) + integrate(integrand, 8 * scale, math.inf, spec)


@dataclass(frozen=True)
class KinematicEnergyBudget:
    current_kinetic: float
    osmotic_kinetic: float
    potential: float
    total: float
    expected: float


def energy_budget(state: WaveState, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> KinematicEnergyBudget:
    """<m v^2/2> + <m u^2/2> + <U> over the Born density."""
    if not state.normalizable:
        raise NonNormalizableError("energy budget needs a normalizable state")
    fields_ = velocity_fields(state)
    m = state.units.mass
    d = state.dimensions

    def on_axis(r):
        point = np.zeros(d)
        point[0] = r
        return point

    def speed2(vec_fn):
        def f(r):
            v = vec_fn(on_axis(r))
            return float(np.sum(v * v))
        return f

    current = 0.5 * m * expectation(state, speed2(fields_.current), spec)
    osmotic = 0.5 * m * expectation(state, speed2(fields_.osmotic), spec)
    potential = expectation(state, lambda r: float(state.potential(on_axis(r))), spec)
    return KinematicEnergyBudget(
        current_kinetic=current,
        osmotic_kinetic=osmotic,
        potential=potential,
        total=current + osmotic + potential,
        expected=state.energy,
    )


def paper_residual_mean(state: WaveState, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Born-density mean of the paper-variant residual (zero by integration by parts)."""
    d = state.dimensions

    def f(r):
        point = np.zeros(d)
        point[0] = r
        return float(hamilton_jacobi_residual(state, point, "paper"))

    return expectation(state, f, spec)

"""Diffusion ensembles of the trembling motion and path-based velocity estimates.

Each path integrates dX = v_plus(X) dt + sqrt(2 nu) dW by Euler-Maruyama,
with nu = hbar/(2m) unless scaled. Path ``i`` draws every random number from
substream ``i`` of the master seed, in this order: initial-position draws,
then ``dimensions`` normals per step. Results therefore do not depend on how
paths are split across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba as nb
import numpy as np

from ..numerics.rng import as_seed, next_normal, next_uniform, seed_state
from .states import HARMONIC, HYDROGEN, PLANE_WAVE, WaveState

_KIND_CODES = {HYDROGEN: 0, HARMONIC: 1, PLANE_WAVE: 2}

#: Hard ceiling on n_paths * (burn_in + n_steps).
DEFAULT_STEP_BUDGET = 5_000_000_000
#: Hard ceiling on stored floats in the position record.
DEFAULT_RECORD_BUDGET = 200_000_000
MAX_DRIFT_GRADIENT_DT = 0.1
#: Reflecting floor for the hydrogen walk, in units of a0/Z.
HYDROGEN_R_MIN = 1e-4


class StepSizeError(ValueError):
    pass


class BudgetExceededError(ValueError):
    pass


@dataclass(frozen=True)
class TrajectoryEnsemble:
    """Recorded positions of a seeded ensemble.

    ``positions`` has shape (n_paths, n_records, dimensions); record ``j`` is
    taken ``j * record_every`` steps after the burn-in.
    """

    state: WaveState
    n_paths: int
    n_steps: int
    dt: float
    master_seed: int
    burn_in_steps: int
    record_every: int
    diffusion: float
    positions: np.ndarray

    @property
    def n_records(self) -> int:
        return self.positions.shape[1]

    @property
    def record_times(self) -> np.ndarray:
        return (self.burn_in_steps + self.record_every * np.arange(self.n_records)) * self.dt

    def radii(self, record=-1) -> np.ndarray:
        return np.linalg.norm(self.positions[:, record, :], axis=-1)


def diffusion_coefficient(state: WaveState) -> float:
    """nu = hbar / (2 m)."""
    return state.units.hbar / (2.0 * state.units.mass)


def drift_gradient_scale(state: WaveState) -> float:
    """Characteristic |d drift / dx|: omega, or hbar Z^2/(m a0^2) at r = a0/Z."""
    u = state.units
    if state.kind == HARMONIC:
        return state.omega
    if state.kind == HYDROGEN:
        return u.hbar / (u.mass * state.length_scale**2)
    return 0.0


@nb.njit(inline="always")
def _gamma3_quantile(p):
    # solve 1 - exp(-t)(1 + t + t^2/2) = p for t >= 0 (Newton, bisection guard)
    lo = 0.0
    hi = 60.0
    t = 3.0
    for _ in range(200):
        cdf = -math.expm1(-t) - math.exp(-t) * (t + 0.5 * t * t)
        if cdf < p:
            lo = t
        else:
            hi = t
        pdf = 0.5 * t * t * math.exp(-t)
        step_ok = False
        if pdf > 0.0:
            tn = t - (cdf - p) / pdf
            if lo < tn < hi:
                step_ok = True
        if not step_ok:
            tn = 0.5 * (lo + hi)
        if abs(tn - t) <= 1e-15 * max(1.0, t):
            return tn
        t = tn
    return t


@nb.njit(nogil=True, cache=True)
def _simulate_block(kind, dim, length, drift_rate, velocity, nu, dt, r_min,
                    seed, first_path, burn_in, n_steps, record_every, out):
    sigma = math.sqrt(2.0 * nu * dt)
    x = np.empty(dim)
    for p in range(out.shape[0]):
        s0, s1, s2, s3 = seed_state(seed, np.uint64(first_path + p))
        # initial position from the Born density
        if kind == 0:
            u, s0, s1, s2, s3 = next_uniform(s0, s1, s2, s3)
            r = 0.5 * length * _gamma3_quantile(1.0 - u)
            norm = 0.0
            while norm == 0.0:
                for c in range(3):
                    z, s0, s1, s2, s3 = next_normal(s0, s1, s2, s3)
                    x[c] = z
                norm = math.sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
            for c in range(3):
                x[c] *= r / norm
        elif kind == 1:
            for c in range(dim):
                z, s0, s1, s2, s3 = next_normal(s0, s1, s2, s3)
                x[c] = z * length / math.sqrt(2.0)
        else:
            for c in range(dim):
                x[c] = 0.0

        total = burn_in + n_steps
        rec = 0
        for step in range(total + 1):
            if step >= burn_in and (step - burn_in) % record_every == 0:
                for c in range(dim):
                    out[p, rec, c] = x[c]
                rec += 1
            if step == total:
                break
            if kind == 0:
                r = math.sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
                factor = -drift_rate * dt / r
                for c in range(3):
                    z, s0, s1, s2, s3 = next_normal(s0, s1, s2, s3)
                    x[c] += factor * x[c] + sigma * z
                r = math.sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
                if r < r_min:
                    if r == 0.0:
                        x[0] = r_min
                    else:
                        scale = (2.0 * r_min - r) / r
                        for c in range(3):
                            x[c] *= scale
            elif kind == 1:
                for c in range(dim):
                    z, s0, s1, s2, s3 = next_normal(s0, s1, s2, s3)
                    x[c] += -drift_rate * x[c] * dt + sigma * z
            else:
                for c in range(dim):
                    z, s0, s1, s2, s3 = next_normal(s0, s1, s2, s3)
                    drift = velocity if c == 0 else 0.0
                    x[c] += drift * dt + sigma * z


def _kernel_parameters(state: WaveState):
    u = state.units
    if state.kind == HYDROGEN:
        # forward drift -hbar/(m a) r_hat with a = a0/Z
        return state.length_scale, u.hbar / (u.mass * state.length_scale), 0.0
    if state.kind == HARMONIC:
        return state.length_scale, state.omega, 0.0
    return 1.0, 0.0, u.hbar * state.k / u.mass


def simulate_ensemble(
    state: WaveState,
    n_paths: int,
    n_steps: int,
    dt: float,
    burn_in_steps: int = 0,
    master_seed: int = 0,
    *,
    record_every: int = 1,
    diffusion_scale: float = 1.0,
    workers: int = 1,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> TrajectoryEnsemble:
    """Seeded Euler-Maruyama ensemble started from the Born density.

    ``diffusion_scale`` multiplies nu = hbar/(2m) while the drift stays
    v_plus; values other than 1 break stationarity on purpose. The plane
    wave starts every path at the origin.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    if n_steps < 0 or burn_in_steps < 0:
        raise ValueError("n_steps and burn_in_steps must be >= 0")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    if not dt > 0:
        raise ValueError("dt must be > 0")
    if diffusion_scale < 0:
        raise ValueError("diffusion_scale must be >= 0")
    if dt * drift_gradient_scale(state) >= MAX_DRIFT_GRADIENT_DT:
        raise StepSizeError(
            f"dt={dt} too large: dt * drift gradient = {dt * drift_gradient_scale(state):.3g}"
            f" >= {MAX_DRIFT_GRADIENT_DT}"
        )
    if n_paths * (burn_in_steps + n_steps) > step_budget:
        raise BudgetExceededError(
            f"{n_paths} paths x {burn_in_steps + n_steps} steps exceeds budget {step_budget}"
        )
    n_records = n_steps // record_every + 1
    if n_paths * n_records * state.dimensions > DEFAULT_RECORD_BUDGET:
        raise BudgetExceededError("position record too large; raise record_every")

    nu = diffusion_coefficient(state) * diffusion_scale
    length, drift_rate, velocity = _kernel_parameters(state)
    r_min = HYDROGEN_R_MIN * state.length_scale if state.kind == HYDROGEN else 0.0
    seed = as_seed(master_seed)
    positions = np.empty((n_paths, n_records, state.dimensions))

    def run(block):
        start, stop = block
        _simulate_block(
            _KIND_CODES[state.kind], state.dimensions, length, drift_rate, velocity,
            nu, dt, r_min, seed, start, burn_in_steps, n_steps, record_every,
            positions[start:stop],
        )

    workers = max(1, min(int(workers), n_paths))
    edges = np.linspace(0, n_paths, workers + 1).astype(int)
    blocks = [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    if workers == 1:
        for block in blocks:
            run(block)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, blocks))

    return TrajectoryEnsemble(
        state=state,
        n_paths=n_paths,
        n_steps=n_steps,
        dt=dt,
        master_seed=int(master_seed),
        burn_in_steps=burn_in_steps,
        record_every=record_every,
        diffusion=nu,
        positions=positions,
    )


@dataclass(frozen=True)
class EstimatorResult:
    """Binned conditional difference quotients along one axis.

    Empty bins hold NaN. ``osmotic_est`` is in the drift convention, so for a
    bound state it points inward (-omega x for the oscillator).
    """

    bin_edges: np.ndarray
    bin_centers: np.ndarray
    bin_means: np.ndarray
    counts: np.ndarray
    v_plus: np.ndarray
    v_minus: np.ndarray
    current_est: np.ndarray
    osmotic_est: np.ndarray
    std_errors: dict
    dt: float


def _clustered_mean(values, bins, paths, n_bins, n_paths):
    """Per-bin mean and a path-clustered standard error (paths are independent)."""
    counts = np.bincount(bins, minlength=n_bins).astype(float)
    sums = np.bincount(bins, weights=values, minlength=n_bins)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = sums / counts
    cell = paths * n_bins + bins
    cell_sum = np.bincount(cell, weights=values, minlength=n_paths * n_bins).reshape(n_paths, n_bins)
    cell_count = np.bincount(cell, minlength=n_paths * n_bins).reshape(n_paths, n_bins)
    resid = cell_sum - cell_count * np.where(np.isfinite(mean), mean, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        se = np.sqrt(np.sum(resid * resid, axis=0)) / counts
    mean[counts == 0] = np.nan
    se[counts == 0] = np.nan
    return mean, se, counts


def estimate_velocities_from_paths(ens: TrajectoryEnsemble, bins, axis: int = 0, lag: int = 1) -> EstimatorResult:
    """Forward/backward difference quotients conditioned on X(t) in a bin.

    v_plus  ~ E[(X(t + h) - X(t)) / h | X(t) in bin]
    v_minus ~ E[(X(t) - X(t - h)) / h | X(t) in bin]
    with h = lag * dt, pooled over paths and every interior record. Requires
    consecutive records (``record_every == 1``).
    """
    if ens.record_every != 1:
        raise ValueError("velocity estimation needs record_every == 1")
    if ens.n_records < 2 * lag + 1:
        raise ValueError(f"need at least {2 * lag + 1} recorded steps per path")
    edges = np.asarray(bins, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("bins must be increasing edges")
    n_bins = edges.size - 1
    h = lag * ens.dt

    x = ens.positions[:, :, axis]
    centre = x[:, lag:-lag]
    forward = (x[:, 2 * lag:] - centre) / h
    backward = (centre - x[:, :-2 * lag]) / h
    paths = np.broadcast_to(np.arange(ens.n_paths)[:, None], centre.shape).ravel()
    centre = centre.ravel()
    forward = forward.ravel()
    backward = backward.ravel()

    which = np.searchsorted(edges, centre, side="right") - 1
    inside = (which >= 0) & (which < n_bins)
    which, paths = which[inside], paths[inside]
    centre, forward, backward = centre[inside], forward[inside], backward[inside]

    args = (which, paths, n_bins, ens.n_paths)
    v_plus, se_plus, counts = _clustered_mean(forward, *args)
    v_minus, se_minus, _ = _clustered_mean(backward, *args)
    _, se_current, _ = _clustered_mean(0.5 * (forward + backward), *args)
    _, se_osmotic, _ = _clustered_mean(0.5 * (forward - backward), *args)
    bin_means, _, _ = _clustered_mean(centre, *args)
    return EstimatorResult(
        bin_edges=edges,
        bin_centers=0.5 * (edges[:-1] + edges[1:]),
        bin_means=bin_means,
        counts=counts.astype(int),
        v_plus=v_plus,
        v_minus=v_minus,
        current_est=(v_plus + v_minus) / 2,
        osmotic_est=(v_plus - v_minus) / 2,
        std_errors={"v_plus": se_plus, "v_minus": se_minus, "current": se_current, "osmotic": se_osmotic},
        dt=h,
    )


def richardson_velocities(ens: TrajectoryEnsemble, bins, axis: int = 0):
    """First-order Richardson combination 2 * est(dt) - est(2 dt) of the binned estimates.

    Returns (fine, coarse, extrapolated) where ``extrapolated`` is a dict with
    ``v_plus``, ``v_minus``, ``current`` and ``osmotic`` arrays.
    """
    fine = estimate_velocities_from_paths(ens, bins, axis, lag=1)
    coarse = estimate_velocities_from_paths(ens, bins, axis, lag=2)
    extrapolated = {
        "v_plus": 2 * fine.v_plus - coarse.v_plus,
        "v_minus": 2 * fine.v_minus - coarse.v_minus,
        "current": 2 * fine.current_est - coarse.current_est,
        "osmotic": 2 * fine.osmotic_est - coarse.osmotic_est,
    }
    return fine, coarse, extrapolated


def fit_slope(x, y, weights=None) -> tuple[float, float]:
    """Weighted least-squares slope and intercept of y against x, ignoring NaN."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float)
    ok = np.isfinite(x) & np.isfinite(y) & np.isfinite(w) & (w > 0)
    slope, intercept = np.polyfit(x[ok], y[ok], 1, w=np.sqrt(w[ok]))
    return float(slope), float(intercept)


def ou_effective_samples(ens: TrajectoryEnsemble) -> float:
    """Effective count of x^2 samples for a stationary oscillator ensemble.

    Records on one path are correlated as exp(-2 omega tau) for x^2; paths
    are independent.
    """
    if ens.state.kind != HARMONIC:
        raise ValueError("effective sample count is defined for the oscillator")
    n = ens.n_records
    rho = math.exp(-2.0 * ens.state.omega * ens.record_every * ens.dt)
    lags = np.arange(1, n)
    tau = 1.0 + 2.0 * float(np.sum((1.0 - lags / n) * rho**lags))
    return ens.n_paths * n * ens.state.dimensions / tau

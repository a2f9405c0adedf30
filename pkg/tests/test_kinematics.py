import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stochastic_electron.kinematics import (
    NonNormalizableError,
    ZeroAmplitudeError,
    decompose_action,
    energy_budget,
    expectation,
    forward_backward_velocities,
    hamilton_jacobi_residual,
    harmonic_ground,
    hydrogen_1s,
    paper_residual_mean,
    plane_wave,
    velocity_fields,
)
from stochastic_electron.numerics import integrate


def radial_points(state, n=50, lo=0.05, hi=6.0):
    radii = state.length_scale * np.linspace(lo, hi, n)
    if state.dimensions == 1:
        return radii[:, None]
    rng = np.random.default_rng(n)
    direction = rng.normal(size=(n, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    return radii[:, None] * direction


BOUND = [hydrogen_1s(1), hydrogen_1s(2), hydrogen_1s(5), harmonic_ground(1.0, 1), harmonic_ground(2.0, 3)]


@pytest.mark.parametrize("state", BOUND, ids=lambda s: f"{s.kind}-{s.z}-{s.omega}-{s.dimensions}")
def test_normalized(state):
    assert expectation(state, lambda r: 1.0) == pytest.approx(1.0, abs=1e-10)


def test_plane_wave_not_normalizable():
    pw = plane_wave(2.0)
    assert not pw.normalizable
    with pytest.raises(NonNormalizableError):
        expectation(pw, lambda r: 1.0)
    with pytest.raises(NonNormalizableError):
        energy_budget(pw)
    with pytest.raises(NonNormalizableError):
        pw.radial_cdf(1.0)


def test_energies():
    assert hydrogen_1s(3).energy == -4.5
    assert harmonic_ground(2.0, 3).energy == 3.0
    assert plane_wave(2.0).energy == 2.0


def test_invalid_states():
    with pytest.raises(ValueError):
        hydrogen_1s(0)
    with pytest.raises(ValueError):
        harmonic_ground(1.0, 2)
    with pytest.raises(ValueError):
        harmonic_ground(-1.0)


@pytest.mark.parametrize("state", BOUND + [plane_wave(1.3)], ids=lambda s: s.kind)
def test_reconstruction(state):
    action = decompose_action(state)
    x = radial_points(state, 400, 0.0, 12.0)
    amp = state.amplitude(x)
    assert np.max(np.abs(action.reconstruct_amplitude(x) / amp - 1)) < 1e-12
    assert np.max(np.abs(action.s2_from_amplitude(x) - action.s2(x))) < 1e-12 * max(1.0, np.max(np.abs(action.s2(x))))
    assert float(action.s2(np.zeros(state.dimensions))) == 0.0


def test_zero_amplitude_error():
    action = decompose_action(harmonic_ground(1.0))
    with pytest.raises(ZeroAmplitudeError):
        action.s2_from_amplitude(np.array([[60.0]]))


def test_hydrogen_action():
    action = decompose_action(hydrogen_1s(1))
    x = np.array([[0.3, 0.4, 0.0], [2.0, 0.0, 0.0]])
    assert np.allclose(action.s2(x), [0.5, 2.0], rtol=1e-14)
    g = action.grad_s2(x)
    assert np.allclose(np.linalg.norm(g, axis=1), 1.0, rtol=1e-14)
    assert np.allclose(g[0], [0.6, 0.8, 0.0], rtol=1e-14)


def test_harmonic_action():
    osc = harmonic_ground(4.0)
    action = decompose_action(osc)
    lam2 = 1 / 4.0
    x = np.linspace(-2, 2, 9)[:, None]
    assert np.allclose(action.s2(x), x[:, 0] ** 2 / (2 * lam2), rtol=1e-14, atol=1e-15)


def test_plane_wave_action():
    pw = plane_wave(1.5)
    action = decompose_action(pw)
    x = np.array([[0.0], [2.0]])
    assert np.all(action.s2(x) == 0.0)
    assert np.allclose(action.s1(x, t=3.0), 1.5 * x[:, 0] - pw.energy * 3.0, rtol=1e-15)


def test_stationary_s1_has_no_gradient():
    for state in BOUND:
        action = decompose_action(state)
        assert np.all(action.grad_s1(radial_points(state)) == 0.0)


def test_velocity_fields():
    h = velocity_fields(hydrogen_1s(3))
    x = radial_points(hydrogen_1s(3))
    assert np.allclose(np.linalg.norm(h.osmotic(x), axis=1), 3.0, rtol=1e-14)
    assert np.all(np.sum(h.osmotic(x) * x, axis=1) > 0)  # outward
    assert np.all(h.current(x) == 0)

    pw = velocity_fields(plane_wave(1.5))
    x1 = np.linspace(-3, 3, 7)[:, None]
    assert np.all(pw.current(x1) == 1.5)
    assert np.all(pw.osmotic(x1) == 0)

    osc = velocity_fields(harmonic_ground(2.0))
    assert np.allclose(osc.osmotic(x1)[:, 0], 2.0 * x1[:, 0], rtol=1e-14)


def test_forward_backward():
    x = np.array([[1.0, 0.0, 0.0]])
    vp, vm = forward_backward_velocities(hydrogen_1s(1), x)
    assert np.allclose(vp, [[-1, 0, 0]]) and np.allclose(vm, [[1, 0, 0]])

    x1 = np.linspace(-2, 2, 5)[:, None]
    vp, vm = forward_backward_velocities(harmonic_ground(1.5), x1)
    assert np.allclose(vp, -1.5 * x1) and np.allclose(vm, 1.5 * x1)

    vp, vm = forward_backward_velocities(plane_wave(0.7), x1)
    assert np.all(vp == 0.7) and np.all(vm == 0.7)


@pytest.mark.parametrize("state", BOUND + [plane_wave(0.4)], ids=lambda s: s.kind)
def test_midpoint_identities(state):
    x = radial_points(state)
    fields = velocity_fields(state)
    vp, vm = forward_backward_velocities(state, x)
    assert np.array_equal((vp + vm) / 2, fields.current(x))
    assert np.array_equal((vp - vm) / 2, fields.osmotic_drift(x))


@pytest.mark.parametrize("state", BOUND, ids=lambda s: f"{s.kind}-{s.z}-{s.dimensions}")
def test_madelung_pointwise(state):
    assert np.max(np.abs(hamilton_jacobi_residual(state, radial_points(state), "madelung"))) < 1e-10


def test_paper_variant_example():
    x = np.array([[0.5, 0.0, 0.0]])
    assert hamilton_jacobi_residual(hydrogen_1s(1), x, "paper")[0] == pytest.approx(1.0, abs=1e-14)
    # the printed balance is not pointwise zero
    assert np.max(np.abs(hamilton_jacobi_residual(hydrogen_1s(1), radial_points(hydrogen_1s(1)), "paper"))) > 0.1


def test_classical_plane_wave():
    x = np.linspace(-3, 3, 11)[:, None]
    assert np.all(hamilton_jacobi_residual(plane_wave(1.1), x, "classical") == 0.0)
    assert np.all(hamilton_jacobi_residual(plane_wave(1.1), x, "madelung") == 0.0)


def test_unknown_variant():
    with pytest.raises(ValueError):
        hamilton_jacobi_residual(hydrogen_1s(1), np.ones((1, 3)), "bohm")


@pytest.mark.parametrize("state", BOUND, ids=lambda s: f"{s.kind}-{s.z}-{s.dimensions}")
def test_paper_residual_mean_zero(state):
    assert abs(paper_residual_mean(state)) < 1e-8


def test_energy_budget_examples():
    b = energy_budget(hydrogen_1s(1))
    assert b.current_kinetic == 0.0
    assert b.osmotic_kinetic == pytest.approx(0.5, abs=1e-10)
    assert b.potential == pytest.approx(-1.0, abs=1e-10)
    assert abs(b.total + 0.5) < 1e-8

    b = energy_budget(harmonic_ground(1.0, 1))
    assert b.osmotic_kinetic == pytest.approx(0.25, abs=1e-10)
    assert b.potential == pytest.approx(0.25, abs=1e-10)
    assert abs(energy_budget(harmonic_ground(1.0, 3)).total - 1.5) < 1e-8


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 10))
def test_energy_budget_hydrogen_any_z(z):
    b = energy_budget(hydrogen_1s(z))
    assert abs(b.total - b.expected) < 1e-8


@settings(max_examples=10, deadline=None)
@given(st.floats(0.1, 10), st.sampled_from([1, 3]))
def test_energy_budget_harmonic_any_omega(omega, d):
    b = energy_budget(harmonic_ground(omega, d))
    assert abs(b.total - b.expected) < 1e-8


@pytest.mark.parametrize("state", BOUND, ids=lambda s: f"{s.kind}-{s.z}-{s.dimensions}")
def test_radial_cdf_is_born_law(state):
    d = state.dimensions
    shell = 2.0 if d == 1 else 4 * math.pi
    for r in (0.3, 1.0, 2.5):
        r = r * state.length_scale

        def density(s):
            p = np.zeros(d)
            p[0] = s
            return shell * s ** (d - 1) * float(state.density(p))

        assert float(state.radial_cdf(r)) == pytest.approx(integrate(density, 0.0, r), abs=1e-12)

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stochastic_electron import charge_cloud as cc
from stochastic_electron.numerics import integrate
from stochastic_electron.units import atomic_units, oscillation_length

CLOUD = cc.GaussianCloud.from_units()
LAM = CLOUD.lambda_o


def test_density_normalized():
    total = integrate(lambda r: 4 * math.pi * r * r * cc.charge_density(CLOUD, r), 0.0, math.inf)
    assert total == pytest.approx(1.0, rel=1e-12)


def test_density_peak_matches_constant_form(au):
    assert cc.charge_density(CLOUD, 0.0) == pytest.approx(cc.density_peak_printed(au), rel=1e-13)


def test_born_identity_grid():
    grid = cc.log_grid(CLOUD)
    assert grid.size == 200
    ratio = cc.oscillator_ground_amplitude(CLOUD, grid) ** 2 / cc.charge_density(CLOUD, grid)
    assert np.max(np.abs(ratio - 1)) < 1e-12


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        cc.charge_density(CLOUD, -1.0)
    with pytest.raises(ValueError):
        cc.self_potential(CLOUD, -1e-3)


def test_self_potential_limits():
    assert cc.self_potential(CLOUD, 0.0) == pytest.approx(-2 / (math.sqrt(math.pi) * LAM), rel=1e-15)
    assert cc.self_potential(CLOUD, 1e-9 * LAM) == pytest.approx(cc.self_potential(CLOUD, 0.0), rel=1e-12)
    assert 50 * LAM * cc.self_potential(CLOUD, 50 * LAM) == -1.0


def test_self_potential_is_integral_form():
    # -(2e/(sqrt(pi) rho)) int_0^(rho/lambda) exp(-x^2) dx, evaluated without erf
    for rho in (0.1 * LAM, LAM, 3 * LAM):
        direct = -2 / (math.sqrt(math.pi) * rho) * integrate(lambda x: math.exp(-x * x), 0.0, rho / LAM)
        assert cc.self_potential(CLOUD, rho) == pytest.approx(direct, rel=1e-13)


def test_poisson_route_matches_erf():
    profile = cc.self_potential_via_poisson(CLOUD)
    window = (profile.radii >= 0.1 * LAM) & (profile.radii <= 10 * LAM)
    erf_values = np.array([cc.self_potential(CLOUD, r) for r in profile.radii[window]])
    assert np.max(np.abs(profile.values[window] / erf_values - 1)) < 1e-6
    far = profile.radii >= 10 * LAM
    assert np.max(np.abs(profile.radii[far] * profile.values[far] + 1)) < 1e-10


def test_poisson_profile_interpolates():
    profile = cc.self_potential_via_poisson(CLOUD)
    rho = 2.345 * LAM
    assert profile(rho) == pytest.approx(cc.self_potential(CLOUD, rho), rel=1e-5)
    assert len(profile.to_rows()) == profile.radii.size


def test_poisson_grid_must_span():
    with pytest.raises(ValueError):
        cc.self_potential_via_poisson(CLOUD, LAM * np.linspace(0.1, 5, 20))


def test_radial_profile_validation():
    with pytest.raises(ValueError):
        cc.RadialProfile(np.array([1.0, 1.0, 2.0]), np.zeros(3))
    with pytest.raises(ValueError):
        cc.RadialProfile(np.array([1.0, 2.0]), np.zeros(3))


def test_self_energy_nested_vs_closed():
    nested = cc.self_energy(CLOUD)
    closed = cc.self_energy_closed(CLOUD)
    assert abs(nested / closed - 1) < 1e-8
    assert closed == pytest.approx(math.sqrt(2 / math.pi) / oscillation_length(atomic_units()), rel=1e-15)
    assert closed == pytest.approx(89.27484, abs=1e-5)


def test_self_energy_rest_form(au):
    assert cc.self_energy_closed_rest_form(au) == pytest.approx(cc.self_energy_closed(CLOUD), rel=1e-14)


def test_energy_budget_ratio():
    b = cc.energy_budget_compare()
    assert abs(b.ratio - math.sqrt(math.pi / 3)) < 1e-9
    assert b.rel_difference == pytest.approx(1 - math.sqrt(3 / math.pi), rel=1e-12)
    assert b.rel_difference == pytest.approx(0.0228, abs=5e-5)
    assert b.e_kinetic < b.e_potential


@settings(max_examples=15, deadline=None)
@given(st.floats(0.5, 3.0))
def test_self_energy_scales_inverse_lambda(factor):
    cloud = cc.GaussianCloud(LAM * factor)
    assert cc.self_energy(cloud) * factor == pytest.approx(cc.self_energy(CLOUD), rel=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 30.0))
def test_potential_bounded_by_point_charge(x):
    rho = x * LAM
    v = cc.self_potential(CLOUD, rho)
    assert v < 0
    if rho > 0:
        assert v >= -1.0 / rho * (1 + 1e-15)

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stochastic_electron.uncertainty import (
    dispersion_assignment,
    energy_functional,
    ground_angular_components,
    ground_angular_dispersion_sum,
    l_square_report,
    minimize_energy,
    radial_momentum_dispersion,
    total_energy_general,
)


def test_radial_dispersion():
    assert radial_momentum_dispersion(1.0) == 0.25
    assert radial_momentum_dispersion(2.0) == 0.0625
    # saturates Delta r Delta p >= hbar/2 with <(Delta r)^2> = r^2
    r = 1.7
    assert radial_momentum_dispersion(r) * r * r == pytest.approx(0.25, rel=1e-15)


@pytest.mark.parametrize("r", [0.0, -1.0])
def test_nonpositive_radius_rejected(r):
    with pytest.raises(ValueError):
        radial_momentum_dispersion(r)
    with pytest.raises(ValueError):
        energy_functional(r, 1)
    with pytest.raises(ValueError):
        total_energy_general(0, 0, r, 0, 0, 1)


def test_ground_angular():
    assert ground_angular_components() == (0.25, 0.25, 0.25)
    assert ground_angular_dispersion_sum() == 0.75


def test_energy_functional_values():
    assert energy_functional(1.0, 1) == -0.5
    assert energy_functional(0.5, 2) == -2.0
    assert -1e-6 < energy_functional(1e7, 1) < 0


def test_total_energy_general_cases():
    assert total_energy_general(0, 1.0, 1.0, 0, 0, 0) == 0.5
    assert total_energy_general(0, 0, 1.0, 0.25, 0, 1) == -0.875


@given(st.floats(0.05, 50), st.integers(1, 10))
def test_general_reduces_to_functional(r, z):
    general = total_energy_general(0.0, 0.0, r, radial_momentum_dispersion(r), ground_angular_dispersion_sum(), z)
    assert general == pytest.approx(energy_functional(r, z), rel=1e-13, abs=1e-13)


def test_minimize_hydrogen():
    v = minimize_energy(1)
    assert v.r_opt == 1.0 and v.e_opt == -0.5
    assert abs(v.numeric_r_opt - v.r_opt) < 1e-9
    assert v.p_r_dispersion == 0.25
    assert v.l_dispersion_sum == 0.75
    assert v.printed_r_opt == 0.5


@pytest.mark.parametrize("z", range(1, 11))
def test_minimize_scaling(z):
    v = minimize_energy(z)
    assert v.r_opt * z == 1.0
    assert v.e_opt / z**2 == -0.5
    assert abs(v.numeric_r_opt - v.r_opt) <= 1e-9
    assert abs(v.numeric_e_opt - v.e_opt) <= 1e-12 * z * z
    # r_opt = 1/z is rounded for most z, so agreement is to rounding only
    assert v.e_opt == pytest.approx(energy_functional(v.r_opt, z), rel=5e-16)


def test_minimize_rejects_small_z():
    with pytest.raises(ValueError):
        minimize_energy(0.5)


def test_dispersion_assignment():
    assert dispersion_assignment(1) == (0.5, 0.5, 0.25)
    assert dispersion_assignment(0) == (0.25, 0.25, 0.25)
    assert dispersion_assignment(3) == (1.5, 1.5, 0.25)
    assert dispersion_assignment(2, exact=True) == (Fraction(1), Fraction(1), Fraction(1, 4))
    with pytest.raises(ValueError):
        dispersion_assignment(-1)
    with pytest.raises(ValueError):
        dispersion_assignment(1.5)


def test_l_square_examples():
    one = l_square_report(1)
    assert one.l_square_paper == 2.25 and one.l_square_standard == 2.0
    ten = l_square_report(10)
    assert ten.l_square_paper == 110.25
    assert ten.l_square_paper / ten.l_square_standard == pytest.approx(1.00227, abs=5e-6)


def test_l_zero_dual_values():
    zero = l_square_report(0)
    assert zero.branch == "ground-state"
    assert zero.l_square_paper == 0.75
    assert zero.l_square_closed == 0.25
    assert all(zero.inequalities_satisfied)
    assert all(zero.saturated)


@pytest.mark.parametrize("l", range(1, 21))
def test_l_square_assembly(l):
    rep = l_square_report(l)
    assert rep.l_square_paper == rep.lz_mean**2 + rep.dx2 + rep.dy2 + rep.dz2
    assert rep.l_square_paper == (l + 0.5) ** 2
    assert all(rep.inequalities_satisfied)
    assert rep.branch == "general"


def test_literal_cyclic_form_recorded():
    # without the hbar^2/4 factor the cyclic relations fail; the report keeps that visible
    assert l_square_report(1).literal_cyclic_satisfied == (False, False)

import numpy as np
import pytest

from stochastic_electron.units import atomic_units


@pytest.fixture(scope="session")
def au():
    return atomic_units()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

import numpy as np
import pytest

from coilphase.spin_algebra import make_spin_operators


@pytest.fixture(scope="session")
def spin_half():
    return make_spin_operators(0.5)


@pytest.fixture(scope="session")
def spin_one():
    return make_spin_operators(1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

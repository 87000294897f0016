import random

import pytest

from adjtorsion.numerics import Context
from adjtorsion.presets import get_preset


@pytest.fixture
def rng():
    return random.Random(20250810)


@pytest.fixture
def ctx():
    return Context(53)


@pytest.fixture(scope="session")
def k41():
    return get_preset("4_1")


@pytest.fixture(scope="session")
def k52():
    return get_preset("5_2")


@pytest.fixture(scope="session")
def k74():
    return get_preset("7_4")


def random_generic_z(rng, reject_radius=0.1):
    """z near 1.5 + 0.5i, bounded away from the branch points +-2."""
    while True:
        z = complex(1.5 + rng.uniform(-0.3, 0.3), 0.5 + rng.uniform(-0.3, 0.3))
        if abs(z - 2) >= reject_radius and abs(z + 2) >= reject_radius:
            return z

import random

import pytest
from mpmath import mp

from kashaev.params import PrecisionContext, new_cable_params


@pytest.fixture(scope="session")
def p17():
    return new_cable_params(1, 7)


@pytest.fixture(scope="session")
def p18():
    return new_cable_params(1, 8)


@pytest.fixture(scope="session")
def p211():
    return new_cable_params(2, 11)


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(128)


@pytest.fixture(scope="session")
def ctx200():
    return PrecisionContext(200)


@pytest.fixture()
def rng():
    return random.Random(20260808)


def random_z(rng, scale=2.0):
    return mp.mpc(rng.uniform(-scale, scale), rng.uniform(-scale, scale))

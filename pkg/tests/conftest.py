import numpy as np
import pytest

from weylseq import Group, WeylSystem


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture(scope="session")
def ws2():
    return WeylSystem(Group((2,)))


@pytest.fixture(scope="session")
def ws3():
    return WeylSystem(Group((3,)))


@pytest.fixture(scope="session")
def ws23():
    return WeylSystem(Group((2, 3)))


SMALL_MODULI = [(2,), (3,), (4,), (2, 2), (5,), (2, 3)]

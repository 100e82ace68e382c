import math

import numpy as np
import pytest
from scipy.special import gamma

from sobolevlab import build_measure, gaussian, parse_potential


@pytest.fixture(scope="session")
def nu1():
    """Standard Gaussian on the default grid."""
    return build_measure(gaussian(1.0), 4001)


@pytest.fixture(scope="session")
def quartic():
    return parse_potential("poly:2=0.5,4=0.25")


@pytest.fixture(scope="session")
def mu_quartic(quartic):
    return build_measure(quartic, 4001)


def gaussian_abs_moment(r: float, sigma: float = 1.0) -> float:
    """E|X|^r for X ~ N(0, sigma^2)."""
    return sigma**r * 2 ** (r / 2) * gamma((r + 1) / 2) / math.sqrt(math.pi)


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sobolevlab.errors import DegenerateInputError, InvalidInputError
from sobolevlab.functionals import beckner_deficit, dirichlet, log_sobolev_entropy, second_moment, variance
from sobolevlab.measure import build_measure
from sobolevlab.potential import gaussian


def test_dirichlet_examples(nu1):
    assert dirichlet(nu1.function(3.0)) == 0.0
    assert dirichlet(nu1.function(lambda x: x)) == pytest.approx(1.0, abs=1e-6)
    # int a^2 e^{2ax} dnu = a^2 e^{2 a^2}
    assert dirichlet(nu1.function(lambda x: np.exp(0.3 * x))) == pytest.approx(0.09 * math.exp(0.18), rel=1e-5)


def test_variance_examples():
    for sigma in (0.5, 1.0, 2.0):
        mu = build_measure(gaussian(sigma), 4001)
        assert variance(mu.function(2.5)) == pytest.approx(0.0, abs=1e-14)
        v = variance(mu.function(lambda x: x))
        assert v == pytest.approx(sigma**2, rel=1e-6)
        assert variance(mu.function(lambda x: 1 + x)) == pytest.approx(v, rel=1e-12)


def test_deficit_examples(nu1):
    assert beckner_deficit(nu1.function(1.7), 1.5) == pytest.approx(0.0, abs=1e-14)
    u = nu1.function(lambda x: np.abs(np.cos(x)) + 0.1)
    m1 = float(nu1.weights @ u.values)
    assert beckner_deficit(u, 2.0) == pytest.approx(second_moment(u) - m1**2, abs=1e-14)
    assert beckner_deficit(u, 2.0) == pytest.approx(variance(u), abs=1e-13)
    a, p = 0.4, 1.5
    expected = (math.exp(2 * a * a) - math.exp(2 * a * a / p)) / (p - 1)
    assert beckner_deficit(nu1.function(lambda x: np.exp(a * x)), p) == pytest.approx(expected, rel=1e-8)


def test_deficit_p_range(nu1):
    for p in (1.0, 2.5, 0.5):
        with pytest.raises(InvalidInputError):
            beckner_deficit(nu1.function(lambda x: x), p)


def test_entropy_examples(nu1):
    assert log_sobolev_entropy(nu1.function(-2.0)) == pytest.approx(0.0, abs=1e-14)
    a = 0.3
    assert log_sobolev_entropy(nu1.function(lambda x: np.exp(a * x))) == pytest.approx(
        2 * a * a * math.exp(2 * a * a), rel=1e-8
    )
    with pytest.raises(DegenerateInputError):
        log_sobolev_entropy(nu1.function(0.0))


def test_entropy_single_atom():
    mu = build_measure(gaussian(1.0), 101)
    u = np.zeros(101)
    u[40] = 3.0
    w = mu.weights[40]
    assert log_sobolev_entropy(mu.function(u)) == pytest.approx(w * 9 * math.log(1 / w), rel=1e-13)


def test_deficit_tends_to_entropy(nu1):
    u = nu1.function(lambda x: np.exp(0.3 * x))
    ent = log_sobolev_entropy(u)
    assert abs(beckner_deficit(u, 1.0001) - ent) / ent <= 1e-3


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-10, 10), min_size=32, max_size=32),
    st.floats(1.01, 2.0),
    st.floats(0.1, 10.0),
)
def test_homogeneity_and_nonnegativity(vals, p, lam):
    mu = build_measure(gaussian(1.0), 32)
    u = mu.function(np.array(vals))
    d = beckner_deficit(u, p)
    assert d >= -1e-12 * max(1.0, second_moment(u))
    assert beckner_deficit(u * lam, p) == pytest.approx(lam**2 * d, rel=1e-9, abs=1e-12 * lam**2 * second_moment(u))
    if second_moment(u) > 0:
        e = log_sobolev_entropy(u)
        assert e >= -1e-12 * second_moment(u)
        assert log_sobolev_entropy(u * lam) == pytest.approx(lam**2 * e, rel=1e-9, abs=1e-12 * lam**2 * second_moment(u))


def test_deficit_at_zero_values(nu1):
    # |u|^{2/p} at 0 is 0; no smoothing
    u = nu1.function(lambda x: np.where(x > 0, x, 0.0))
    assert math.isfinite(beckner_deficit(u, 1.3))

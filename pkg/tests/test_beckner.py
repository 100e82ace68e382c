import math

import numpy as np
import pytest

from conftest import gaussian_abs_moment
from sobolevlab.beckner import (
    beckner_quotient,
    divergence_flag,
    entropy_quotient,
    estimate_c1_entropy,
    estimate_cp,
    quotient_gradient,
)
from sobolevlab.cli import gradient_check
from sobolevlab.errors import DegenerateInputError, InvalidInputError
from sobolevlab.functionals import dirichlet, variance
from sobolevlab.measure import build_measure
from sobolevlab.potential import parse_potential, power
from sobolevlab.spectral import spectral_gap


@pytest.mark.parametrize("p", [1.1, 1.5, 1.9])
def test_quotient_linear_function(nu1, p):
    expected = (1 - gaussian_abs_moment(2 / p) ** p) / (p - 1)
    assert beckner_quotient(nu1.function(lambda x: x), p) == pytest.approx(expected, rel=1e-5)


@pytest.mark.parametrize("a", [0.5, 0.1, 0.02])
def test_quotient_exponential(nu1, a):
    p = 1.5
    expected = (math.exp(2 * a * a) - math.exp(2 * a * a / p)) / ((p - 1) * a * a * math.exp(2 * a * a))
    assert beckner_quotient(nu1.function(lambda x: np.exp(a * x)), p) == pytest.approx(expected, rel=1e-4)
    assert abs(expected - 2 / p) < 2 * a


def test_quotient_small_perturbation_of_one(mu_quartic):
    p = 1.5
    x = mu_quartic.function(lambda x: x)
    rayleigh = variance(x) / dirichlet(x)
    q = beckner_quotient(mu_quartic.function(lambda t: 1 + 1e-3 * t), p)
    assert q == pytest.approx(2 / p * rayleigh, rel=1e-3)


def test_constant_is_degenerate(nu1):
    with pytest.raises(DegenerateInputError):
        beckner_quotient(nu1.function(2.0), 1.5)
    with pytest.raises(DegenerateInputError):
        entropy_quotient(nu1.function(2.0))
    with pytest.raises(InvalidInputError):
        beckner_quotient(nu1.function(lambda x: x), 1.0)


def test_estimate_gaussian(nu1):
    est = estimate_cp(nu1, 1.5)
    assert 4 / 3 - 0.03 <= est.value <= 4 / 3 + 0.02
    assert est.side == "lower" and est.method == "variational_lower"
    # soundness: the value is the quotient of the returned witness
    assert beckner_quotient(est.witness, 1.5) == pytest.approx(est.value, rel=1e-12)
    two = estimate_cp(nu1, 2.0).value
    c2 = spectral_gap(nu1).value
    assert two == pytest.approx(1.0, rel=0.01) and two == pytest.approx(c2, rel=0.01)


def test_restricted_not_above_unrestricted(nu1):
    r = estimate_cp(nu1, 1.5, "restricted")
    u = estimate_cp(nu1, 1.5)
    assert r.value <= u.value + 1e-9
    assert abs(float(nu1.weights @ r.witness.values)) < 1e-10


def test_extra_seeds_never_lower(mu_quartic):
    base = estimate_cp(mu_quartic, 1.25, max_iter=50)
    extra = estimate_cp(mu_quartic, 1.25, extra_seeds=[np.cos(mu_quartic.nodes)], max_iter=50)
    assert extra.value >= base.value
    with pytest.raises(InvalidInputError):
        estimate_cp(mu_quartic, 1.25, extra_seeds=[np.ones(3)])


def test_invalid_mode(nu1):
    with pytest.raises(InvalidInputError):
        estimate_cp(nu1, 1.5, "sideways")


@pytest.mark.parametrize("text", ["gaussian:sigma=1", "poly:2=0.5,4=0.25", "power:alpha=1.5"])
@pytest.mark.parametrize("p", [1.25, 1.75])
def test_sandwich(text, p):
    mu = build_measure(parse_potential(text), 4001)
    c2 = spectral_gap(mu).value
    est = estimate_cp(mu, p).value
    assert 2 / p * c2 * 0.99 <= est <= c2 / (p - 1) * 1.01


def test_c1_gaussian(nu1):
    est = estimate_c1_entropy(nu1, sweep_p=None)
    assert est.value == pytest.approx(2.0, rel=0.05)
    assert entropy_quotient(est.witness) == pytest.approx(est.value, rel=1e-12)


def test_divergence_flag_rule():
    assert divergence_flag([1.0, 1.1, 1.15])[0] == "bounded"
    assert divergence_flag([1.0, 2.0, 4.0])[0] == "divergent"
    assert divergence_flag([1.0])[0] == "undetermined"
    # the first ratio may exceed the threshold as long as the sequence settles
    assert divergence_flag([2 / 3, 0.8, 0.909, 0.952])[0] == "bounded"


def test_sweep_flags():
    a2 = estimate_c1_entropy(build_measure(power(2.0), 4001))
    assert a2.details["sweep"]["flag"] == "bounded"
    a12 = estimate_c1_entropy(build_measure(power(1.2), 4001))
    s = a12.details["sweep"]
    assert s["flag"] == "divergent"
    assert all(b > a for a, b in zip(s["cp"], s["cp"][1:]))
    assert "heuristic" in s


def test_gradient_against_finite_differences():
    res = gradient_check(seed=3, points=20)
    assert res["max_relative_deviation"] <= 1e-5


def test_gradient_shape(nu1):
    g = quotient_gradient(nu1.function(lambda x: np.exp(0.2 * x)), 1.5)
    assert g.shape == nu1.nodes.shape and np.all(np.isfinite(g))

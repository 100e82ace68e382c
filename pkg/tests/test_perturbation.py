import json
import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from sobolevlab import asymptotics
from sobolevlab.beckner import beckner_quotient, estimate_cp
from sobolevlab.errors import InvalidInputError, ReferenceConstantUnavailable
from sobolevlab.perturbation import (
    REPORT_FIELDS,
    compute_Z_delta,
    corollary2_sweep,
    corollary5_check,
    delta_tail,
    ground_state_energy_identity,
    jensen_gap_check,
    restricted_bound,
    shared_grids,
    theorem1_bound,
)
from sobolevlab.potential import gaussian, parse_potential, polynomial, power
from sobolevlab.suites import random_smooth

W1 = gaussian(1.0)


def _fd_delta(V, W, grids, x, h=1e-4):
    Z = grids.Z
    z1 = (Z(x + h) - Z(x - h)) / (2 * h)
    z2 = (Z(x + h) - 2 * Z(x) + Z(x - h)) / h**2
    return z1 * z1 - z2 + z1 * W.grad(x)


def test_identical_potentials_give_zero():
    g = shared_grids(W1, W1, 1001)
    zd = compute_Z_delta(W1, W1, g)
    assert np.all(zd.Z.values == 0.0) and np.all(zd.delta.values == 0.0)


def test_delta_at_origin_for_quartic():
    V = polynomial({4: 0.25})
    g = shared_grids(V, W1, 2001)
    zd = compute_Z_delta(V, W1, g)
    x = np.array([0.0, 0.7, -1.3])
    V_d = 0.5 * (V.grad(x) - W1.grad(x))
    V_dd = 0.5 * (V.hess(x) - W1.hess(x))
    exact = V_d**2 - V_dd + V_d * W1.grad(x)
    assert exact[0] == 0.5
    assert np.allclose(_fd_delta(V, W1, g, x), exact, atol=1e-5)
    xs = g.nodes
    zp = 0.5 * (xs**3 - xs)
    assert np.allclose(zd.delta.values, zp * zp - 0.5 * (3 * xs**2 - 1) + zp * xs, rtol=1e-12, atol=1e-12)


def test_delta_two_gaussians_is_quadratic():
    sigma, tau = 0.8, 1.7
    V, W = gaussian(sigma), gaussian(tau)
    g = shared_grids(V, W, 2001)
    a = 0.5 * (1 / sigma**2 - 1 / tau**2)
    x = np.array([-1.0, 0.3, 2.2])
    oracle = a * a * x * x - a + a * x * x / tau**2
    assert np.allclose(_fd_delta(V, W, g, x), oracle, atol=1e-5)
    zd = compute_Z_delta(V, W, g)
    assert np.allclose(zd.delta.values, a * a * g.nodes**2 - a + a * g.nodes**2 / tau**2, rtol=1e-12, atol=1e-12)


def test_delta_invariant_under_constants():
    V = parse_potential("poly:0=5,2=0.5,4=0.25")
    V0 = parse_potential("poly:2=0.5,4=0.25")
    g, g0 = shared_grids(V, W1, 1001), shared_grids(V0, W1, 1001)
    assert np.array_equal(compute_Z_delta(V, W1, g).delta.values, compute_Z_delta(V0, W1, g0).delta.values)
    assert np.allclose(g.Z(g.nodes), g0.Z(g0.nodes), atol=1e-9)


def test_same_measure_bound_is_closed_form():
    r = theorem1_bound(W1, W1, 1.5)
    assert r.passed and r.m == 0.0 and r.z_norm_nu == 0.0
    assert r.cp_star == pytest.approx(4 / 3, rel=1e-14)
    assert r.cp_bound == pytest.approx(16 / 9, abs=1e-9)
    assert r.cp_bound >= r.c2_mu.value


def test_report_invariants_and_json(quartic):
    r = theorem1_bound(quartic, W1, 1.25)
    assert r.passed and math.isfinite(r.cp_bound)
    assert r.cp_star == pytest.approx(r.cp_nu.value / r.t_star, rel=1e-12)
    assert r.cp_bound == 2 / r.p * r.c2_mu.value + (2 / r.p - 1) * r.cp_star
    assert 0 < r.t_star <= 1
    d = r.to_json_dict()
    assert tuple(d) == REPORT_FIELDS
    json.dumps(d)
    assert "sandwich_chain" in r.diagnostics and "chain_holds" in r.diagnostics["sandwich_chain"]
    assert r.cp_bound >= r.c2_mu.value


@pytest.mark.parametrize("p", [1.25, 1.5])
def test_bound_dominates_estimate(quartic, mu_quartic, p):
    r = theorem1_bound(quartic, W1, p)
    assert r.cp_bound >= estimate_cp(mu_quartic, p).value - 1e-6


def test_restricted_bound_certifies_mean_zero_functions(quartic, mu_quartic):
    p = 1.5
    r = theorem1_bound(quartic, W1, p)
    rng = np.random.default_rng(7)
    worst = -math.inf
    for _ in range(100):
        v = random_smooth(rng)(mu_quartic.nodes)
        v = v - float(mu_quartic.weights @ v)
        worst = max(worst, beckner_quotient(mu_quartic.function(v), p))
    assert worst <= r.cp_star + 1e-6
    assert estimate_cp(mu_quartic, p, "restricted").value <= r.cp_star + 1e-6


def test_restricted_bound_branches():
    t, c = restricted_bound(1.0, 2.0, 0.1, 5.0)
    assert (t, c) == (1.0, 2.0)
    t, c = restricted_bound(1.0, 2.0, 1.0, 0.0)
    assert c == 4.0 and t == 0.5


def test_power_against_gaussian_fails_local_condition():
    V = power(1.2)
    for side in (1, -1):
        lead = asymptotics.leading(delta_tail(V, W1, side))
        # Z ~ -x^2/4: Z'^2 + Z'W' ~ x^2/4 - x^2/2
        assert lead == (2.0, pytest.approx(-0.25))
    r = theorem1_bound(V, W1, 1.5)
    assert not r.passed and r.cp_bound is None
    assert r.m_bounded_below is False and "m_unbounded_below" in r.flags
    assert r.to_json_dict()["cp_bound"] is None


def test_input_errors(quartic):
    with pytest.raises(InvalidInputError):
        theorem1_bound(quartic, W1, 2.0)
    with pytest.raises(ReferenceConstantUnavailable):
        theorem1_bound(quartic, power(1.5), 1.5)
    with pytest.raises(ReferenceConstantUnavailable):
        theorem1_bound(quartic, parse_potential("poly:2=0.5,4=0.1"), 1.0)


def test_curvature_reference():
    W = parse_potential("poly:2=0.5,4=0.1")
    r = theorem1_bound(parse_potential("poly:2=0.5,4=0.25"), W, 1.5)
    assert r.cp_nu.method == "bakry_emery" and r.cp_nu.value == pytest.approx(2 / 1.5, rel=1e-12)
    assert r.passed


def test_ground_state_identity_trivial():
    g = shared_grids(W1, W1, 1001)
    chk = ground_state_energy_identity(np.sin(g.nodes), W1, W1, g)
    assert chk.residual == 0.0


def test_ground_state_identity_converges(quartic):
    res = []
    for n in (4001, 8001):
        g = shared_grids(quartic, W1, n)
        chk = ground_state_energy_identity(np.sin(g.nodes), quartic, W1, g)
        res.append(chk.relative_residual)
    assert res[0] <= 1e-3
    assert res[0] / res[1] >= 3


def test_ground_state_identity_with_unit_g():
    # mild quartic: e^Z stays representable on the shared grid
    V = parse_potential("poly:2=0.5,4=0.01")
    g = shared_grids(V, W1, 4001)
    v = np.exp(g.Z(g.nodes))
    chk = ground_state_energy_identity(v, V, W1, g)
    delta = compute_Z_delta(V, W1, g).delta.values
    assert chk.rhs == pytest.approx(float(g.nu.weights @ delta), rel=1e-6)
    assert chk.relative_residual <= 1e-3


def test_jensen_trivial_and_random(quartic):
    g0 = shared_grids(W1, W1, 1001)
    j = jensen_gap_check(np.cos(g0.nodes), W1, W1, 1.5, g0)
    assert j.B == 0.0 and j.lower_bound == 0.0 and j.margin == 0.0
    g = shared_grids(quartic, W1, 4001)
    rng = np.random.default_rng(1)
    for _ in range(20):
        v = random_smooth(rng)(g.nodes)
        assert jensen_gap_check(v, quartic, W1, 1.5, g).margin >= -1e-10


def test_jensen_unit_g():
    V = parse_potential("poly:2=0.5,4=0.01")
    g = shared_grids(V, W1, 4001)
    v = np.exp(g.Z(g.nodes))
    j = jensen_gap_check(v, V, W1, 1.5, g)
    direct = float(g.mu.weights @ np.abs(v) ** (2 / 1.5)) ** 1.5 - 1.0
    assert j.B == pytest.approx(direct, rel=1e-9)
    assert j.margin >= 0


def test_jensen_rejects_zero():
    g = shared_grids(W1, W1, 201)
    with pytest.raises(InvalidInputError):
        jensen_gap_check(np.zeros(g.nodes.size), W1, W1, 1.5, g)


def test_sweep_gaussian_endpoint():
    s = corollary2_sweep(W1, W1)
    assert s.endpoint.cp_bound == pytest.approx(4.0, abs=1e-9)
    bounds = [r.cp_bound for r in s.reports]
    assert all(b > a for a, b in zip(bounds, bounds[1:]))
    assert s.liminf_surrogate == min(bounds)


def test_sweep_quartic_finite(quartic):
    s = corollary2_sweep(quartic, W1)
    assert all(r is not None and r.passed and math.isfinite(r.cp_bound) for r in s.reports)
    # Z is unbounded, so the endpoint with the sup norm fails
    assert s.endpoint is not None and not s.endpoint.passed


def test_sweep_errors(quartic):
    with pytest.raises(InvalidInputError):
        corollary2_sweep(quartic, W1, [])
    s = corollary2_sweep(quartic, W1, [1.5, 2.5])
    assert s.reports[0] is None and 2.5 in s.errors and s.reports[1].passed


def test_cor5_quartic_passes_everywhere():
    V = polynomial({4: 0.25})
    res = corollary5_check(V, [0.5, 1.0, 2.0])
    assert all(e.passed for e in res.entries)
    assert res.best_sigma in (0.5, 1.0, 2.0)
    best = min(res.entries, key=lambda e: e.report.cp_bound)
    assert res.best_sigma == best.sigma
    # inf of x^6 - 6x^2 - x^2/sigma^4 on the line
    for e in res.entries:
        f = lambda x, s=e.sigma: x**6 - 6 * x**2 - x**2 / s**4
        oracle = minimize_scalar(f, bounds=(0.01, 5), method="bounded", options={"xatol": 1e-10}).fun
        assert e.e_inf_grid == pytest.approx(oracle, rel=1e-4)


def test_cor5_abs_fails_everywhere():
    res = corollary5_check(power(1.0), [0.5, 1.0, 2.0])
    assert not res.any_passed and res.best_sigma is None
    assert all(e.e_tail == {"+inf": "-inf", "-inf": "-inf"} for e in res.entries)


def test_cor5_gaussian_boundary_from_sign_analysis():
    # E = (1 - 1/sigma^4) x^2 - 2: bounded below exactly when sigma >= 1
    res = corollary5_check(gaussian(1.0), [0.5, 0.9, 1.0, 1.1, 2.0])
    verdict = {e.sigma: e.passed for e in res.entries}
    assert verdict == {0.5: False, 0.9: False, 1.0: True, 1.1: True, 2.0: True}


def test_cor5_rejects_bad_sigma():
    with pytest.raises(InvalidInputError):
        corollary5_check(W1, [])
    with pytest.raises(InvalidInputError):
        corollary5_check(W1, [1.0, -1.0])


def test_norm_flag_when_measures_differ(quartic):
    r = theorem1_bound(quartic, W1, 1.5)
    assert r.z_norm_nu != r.z_norm_mu
    assert "z_norm_mu_nu_differ" in r.flags


def test_c2_uses_own_grid(quartic, mu_quartic):
    from sobolevlab.spectral import spectral_gap

    r = theorem1_bound(quartic, W1, 1.5)
    assert r.c2_mu.value == spectral_gap(mu_quartic).value

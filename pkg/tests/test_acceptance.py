"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one line ``[PASS|FAIL] criterion N: ...`` (with runtime) to
the terminal, whatever the pytest capture mode.
"""

import time

import numpy as np
import pytest

from sobolevlab.beckner import estimate_c1_entropy, estimate_cp
from sobolevlab.cli import gradient_check, run
from sobolevlab.functionals import beckner_deficit, log_sobolev_entropy
from sobolevlab.measure import build_measure
from sobolevlab.moments import remark2_gap
from sobolevlab.perturbation import corollary5_check, ground_state_energy_identity, shared_grids, theorem1_bound
from sobolevlab.potential import gaussian, parse_potential, polynomial, power
from sobolevlab.spectral import spectral_gap
from sobolevlab.suites import run_suite


@pytest.fixture
def report(capsys):
    def emit(n, ok, text, seconds):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {text} ({seconds:.2f} s)")

    return emit


def test_criterion_01_gaussian_gap(report):
    t0 = time.perf_counter()
    checks = []
    for sigma, lo, hi in ((1.0, 0.995, 1.005), (2.0, 3.98, 4.02)):
        t = time.perf_counter()
        c2 = spectral_gap(build_measure(gaussian(sigma), 4001)).value
        checks.append((sigma, c2, lo <= c2 <= hi, time.perf_counter() - t))
    ok = all(c[2] and c[3] <= 1.0 for c in checks)
    report(1, ok, ", ".join(f"C2(sigma={s:g})={v:.6f} in {dt:.3f}s" for s, v, _, dt in checks), time.perf_counter() - t0)
    assert ok


def test_criterion_02_gaussian_beckner(report, nu1):
    t0 = time.perf_counter()
    rows = []
    for p in (1.1, 1.25, 1.5, 1.75, 2.0):
        t = time.perf_counter()
        val = estimate_cp(nu1, p).value
        dt = time.perf_counter() - t
        rows.append((p, val, 2 / p - 0.03 <= val <= 2 / p + 0.02 and dt <= 10.0, dt))
    ok = all(r[2] for r in rows)
    report(2, ok, "; ".join(f"p={p:g}: {v:.5f} vs 2/p={2 / p:.5f}" for p, v, _, _ in rows), time.perf_counter() - t0)
    assert ok


def test_criterion_03_log_sobolev(report, nu1):
    t0 = time.perf_counter()
    c1 = estimate_c1_entropy(nu1, sweep_p=None).value
    u = nu1.function(lambda x: np.exp(0.3 * x))
    ent = log_sobolev_entropy(u)
    gap = abs(beckner_deficit(u, 1.0001) - ent) / ent
    dt = time.perf_counter() - t0
    ok = 1.90 <= c1 <= 2.02 and gap <= 1e-3 and dt <= 10.0
    report(3, ok, f"C1={c1:.6f}, deficit/entropy relative gap={gap:.2e}", dt)
    assert ok


def test_criterion_04_sandwich(report):
    t0 = time.perf_counter()
    worst = []
    ok = True
    for text in ("gaussian:sigma=1", "poly:2=0.5,4=0.25", "power:alpha=1.5"):
        mu = build_measure(parse_potential(text), 4001)
        c2 = spectral_gap(mu).value
        for p in (1.1, 1.25, 1.5, 1.75, 2.0):
            est = estimate_cp(mu, p).value
            lo, hi = 2 / p * c2 * 0.99, c2 / (p - 1) * 1.01
            ok &= lo <= est <= hi
            worst.append(min(est / lo, hi / est))
    report(4, ok, f"15 (measure, p) pairs, tightest ratio to a 1%-widened side = {min(worst):.4f}", time.perf_counter() - t0)
    assert ok


def test_criterion_05_dominance(report):
    t0 = time.perf_counter()
    W = gaussian(1.0)
    ok = True
    margins = []
    for V in (polynomial({4: 0.25, 2: 0.5}), polynomial({2: 0.5, 4: 0.2})):
        mu = build_measure(V, 4001)
        for p in (1.1, 1.25, 1.5):
            r = theorem1_bound(V, W, p)
            est = estimate_cp(mu, p).value
            ok &= r.passed and r.cp_bound >= est and r.cp_bound >= r.c2_mu.value
            margins.append(r.cp_bound / est)
    dt = time.perf_counter() - t0
    ok &= dt <= 30.0
    report(5, ok, f"6 (V, p) cases, bound/estimate ratios in [{min(margins):.3f}, {max(margins):.3f}]", dt)
    assert ok


def test_criterion_06_proof_identities(report):
    t0 = time.perf_counter()
    V, W = polynomial({2: 0.5, 4: 0.25}), gaussian(1.0)
    res = []
    for n in (4001, 8001):
        g = shared_grids(V, W, n)
        res.append(ground_state_energy_identity(np.sin(g.nodes), V, W, g).relative_residual)
    gs = run_suite("groundstate", 10, seed=42, n=4001)
    jensen = run_suite("jensen", 100, seed=42)
    lift = run_suite("lift", 1000, seed=42)
    ok = res[0] <= 1e-3 and res[0] / res[1] >= 3 and gs.passed and jensen.passed and lift.passed
    report(
        6,
        ok,
        f"ground state sin x: {res[0]:.2e} -> {res[1]:.2e} (x{res[0] / res[1]:.2f}), random worst {gs.worst:.2e}; "
        f"jensen min margin {jensen.worst:.3e}; lift max residual {lift.worst:.2e}",
        time.perf_counter() - t0,
    )
    assert ok


def test_criterion_07_moment_inequalities(report):
    t0 = time.perf_counter()
    suites = {s: run_suite(s, 1000, seed=42) for s in ("lemma4", "remark1", "remark2")}
    two_atom = remark2_gap([0.5, 0.5], [1.0, -1.0], 4.0)
    ok = all(r.passed for r in suites.values()) and abs(two_atom - 2.0) <= 1e-12
    report(
        7,
        ok,
        ", ".join(f"{k} worst {r.worst:.2e}" for k, r in suites.items()) + f", two-atom gap {two_atom!r}",
        time.perf_counter() - t0,
    )
    assert ok


def test_criterion_08_counterexample_family(report):
    t0 = time.perf_counter()
    sweep = (1.5, 1.25, 1.1, 1.05)
    s12 = estimate_c1_entropy(build_measure(power(1.2), 4001), sweep_p=sweep).details["sweep"]
    s2 = estimate_c1_entropy(build_measure(power(2.0), 4001), sweep_p=sweep).details["sweep"]
    vals = s12["cp"]
    increasing = all(b > a for a, b in zip(vals, vals[1:]))
    ok = increasing and vals[-1] / vals[0] >= 2 and s12["flag"] == "divergent" and s2["flag"] == "bounded"
    report(
        8,
        ok,
        f"alpha=1.2: {', '.join(f'{v:.3f}' for v in vals)} (last/first {vals[-1] / vals[0]:.2f}, {s12['flag']}); "
        f"alpha=2: {s2['flag']}",
        time.perf_counter() - t0,
    )
    assert ok


SIGMAS = (0.5, 0.75, 1.0, 1.5, 2.0)


@pytest.mark.xfail(
    strict=True,
    reason="for V = x^2/2 the condition E = (1 - sigma^-4) x^2 - 2 is bounded below iff sigma >= 1, "
    "the reverse of the stated classification",
)
def test_criterion_09_gaussian_reference_classification(report):
    t0 = time.perf_counter()
    quart = corollary5_check(polynomial({4: 0.25}), SIGMAS)
    code = run(["cor5", "--potential", "power:alpha=1", "--p", "1.5"], out=_Sink())
    absx = corollary5_check(power(1.0), SIGMAS)
    harm = corollary5_check(polynomial({2: 0.5}), SIGMAS)
    part_a = all(e.passed for e in quart.entries)
    part_b = not absx.any_passed and code == 3
    stated = {s: s <= 1.0 for s in SIGMAS}
    got = {e.sigma: e.passed for e in harm.entries}
    part_c = got == stated
    ok = part_a and part_b and part_c
    report(
        9,
        ok,
        f"x^4/4 all pass: {part_a}; |x| all fail with exit 3: {part_b}; "
        f"x^2/2 pass set {sorted(s for s, v in got.items() if v)} vs stated {sorted(s for s, v in stated.items() if v)}",
        time.perf_counter() - t0,
    )
    assert part_c


def test_criterion_09_met_clauses_and_sign_boundary():
    """The two clauses that hold, plus the x^2/2 boundary derived from the sign of E."""
    assert all(e.passed for e in corollary5_check(polynomial({4: 0.25}), SIGMAS).entries)
    assert not corollary5_check(power(1.0), SIGMAS).any_passed
    assert run(["cor5", "--potential", "power:alpha=1", "--p", "1.5"], out=_Sink()) == 3
    harm = corollary5_check(polynomial({2: 0.5}), SIGMAS)
    assert {e.sigma: e.passed for e in harm.entries} == {s: s >= 1.0 for s in SIGMAS}


def test_criterion_10_selftest(report):
    t0 = time.perf_counter()
    res = gradient_check(seed=0, points=20)
    ok = res["max_relative_deviation"] <= 1e-5
    report(10, ok, f"max relative deviation {res['max_relative_deviation']:.2e} over 20 points", time.perf_counter() - t0)
    assert ok


class _Sink:
    def write(self, _):
        pass

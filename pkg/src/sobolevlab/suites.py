"""Randomized property suites for the moment inequalities and proof identities.

Each trial draws its own generator from ``SeedSequence(seed).spawn(trials)``,
so a suite is reproducible from its master seed and any single trial can be
replayed.  Failing trials keep the offending (weights, u, q) for CSV export.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import moments
from .measure import build_measure
from .perturbation import SharedGrids, ground_state_energy_identity, jensen_gap_check, shared_grids
from .potential import gaussian, polynomial, power

SUITES = ("lemma4", "remark1", "remark2", "lift", "jensen", "groundstate")
TOLERANCES = {
    "lemma4": 1e-12,
    "remark1": 1e-10,
    "remark2": 1e-10,
    "lift": 1e-12,
    "jensen": 1e-10,
    "groundstate": 1e-3,
}
DEFAULT_TRIALS = {"lemma4": 1000, "remark1": 1000, "remark2": 1000, "lift": 1000, "jensen": 100, "groundstate": 10}
#: residual reduction required when the shared grid is refined twofold
GROUNDSTATE_RATIO = 3.0
_MEASURE_N = 201


@dataclass
class Failure:
    trial: int
    value: float
    weights: np.ndarray
    u: np.ndarray
    q: float


@dataclass
class SuiteResult:
    suite: str
    trials: int
    seed: int
    tolerance: float
    worst: float
    failures: list[Failure] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def failure_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["trial", "weight", "u", "q"])
        for f in self.failures:
            for wi, ui in zip(f.weights, f.u):
                w.writerow([f.trial, repr(float(wi)), repr(float(ui)), repr(float(f.q))])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "worst": self.worst,
            "failures": len(self.failures),
            "passed": self.passed,
            **self.details,
        }


# -- random inputs -------------------------------------------------------------

@lru_cache(maxsize=64)
def _grid_weights(kind: str, param: float) -> tuple[np.ndarray, np.ndarray]:
    if kind == "gaussian":
        V = gaussian(param)
    elif kind == "power":
        V = power(param)
    else:
        V = polynomial({2: 0.5, 4: param})
    mu = build_measure(V, _MEASURE_N)
    return mu.nodes, mu.weights


def random_measure(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """(nodes, weights): an arbitrary probability vector or a potential grid."""
    kind = rng.integers(4)
    if kind == 0:
        n = int(rng.integers(2, 41))
        w = rng.exponential(size=n)
        return np.linspace(-1.0, 1.0, n), w / w.sum()
    # parameters drawn from a small lattice so the measure cache stays useful
    if kind == 1:
        x, w = _grid_weights("gaussian", float(rng.choice([0.5, 1.0, 2.0])))
    elif kind == 2:
        x, w = _grid_weights("power", float(rng.choice([1.0, 1.2, 1.5, 1.8, 2.0])))
    else:
        x, w = _grid_weights("poly", float(rng.choice([0.05, 0.25, 1.0])))
    return x, w


def random_function(rng: np.random.Generator, x: np.ndarray) -> np.ndarray:
    """Polynomial, exponential, sign-changing piecewise or single-atom spike."""
    t = x / max(np.max(np.abs(x)), 1e-300)
    kind = rng.integers(4)
    if kind == 0:
        u = np.polynomial.polynomial.polyval(t, rng.normal(size=int(rng.integers(1, 6))))
    elif kind == 1:
        u = rng.normal() * np.exp(rng.uniform(-3, 3) * t) + rng.normal() * rng.integers(2)
    elif kind == 2:
        cuts = np.sort(rng.uniform(-1, 1, size=int(rng.integers(1, 5))))
        vals = rng.normal(size=cuts.size + 1)
        u = vals[np.searchsorted(cuts, t)]
    else:
        u = np.full(x.size, rng.normal() * rng.integers(2))
        u[rng.integers(x.size)] += rng.normal() * 5
    if not np.any(u):
        u = np.ones_like(x)
    return u * (rng.uniform(0.5, 2.0) / np.max(np.abs(u)))


def _moment_trial(suite: str, rng: np.random.Generator):
    x, w = random_measure(rng)
    u = random_function(rng, x)
    if suite == "lemma4":
        q = float(rng.choice([1.0, 2.0])) if rng.random() < 0.1 else rng.uniform(1.0, 2.0)
        return moments.lemma4_gap(w, u, q), w, u, q
    if suite == "remark1":
        if rng.random() < 0.5:
            q = rng.uniform(2.0, 10.0)
            return moments.remark1_gap(w, u, q, "upper_q_ge_2"), w, u, q
        q = rng.uniform(1.0, 2.0)
        if q == 1.0:
            q = 2.0
        return moments.remark1_gap(w, u, q, "lower_q_le_2"), w, u, q
    if suite == "remark2":
        q = rng.uniform(2.0, 10.0)
        if q == 2.0:
            q = 10.0
        return moments.remark2_gap(w, u, q), w, u, q
    p = rng.uniform(1.0, 2.0)
    if p == 1.0:
        p = 1.5
    return abs(moments.theorem1_lift_identity(w, u, p)), w, u, p


# -- proof identities on the quartic test pair ------------------------------------

def _quartic_pair():
    return polynomial({2: 0.5, 4: 0.25}), gaussian(1.0)


@lru_cache(maxsize=4)
def _pair_grids(n: int) -> SharedGrids:
    V, W = _quartic_pair()
    return shared_grids(V, W, n)


def random_smooth(rng: np.random.Generator):
    """A callable trigonometric-polynomial test function with frequencies <= 2."""
    k = int(rng.integers(1, 4))
    freq = rng.uniform(0.2, 2.0, size=k)
    amp = rng.normal(size=k)
    phase = rng.uniform(0, 2 * math.pi, size=k)
    c0 = rng.normal()

    def v(x):
        x = np.asarray(x, dtype=float)[..., None]
        return c0 + np.sum(amp * np.sin(freq * x + phase), axis=-1)

    return v


def _jensen_trial(rng: np.random.Generator, n: int):
    V, W = _quartic_pair()
    g = _pair_grids(n)
    v = random_smooth(rng)(g.nodes)
    p = float(rng.choice([1.1, 1.25, 1.5, 1.75]))
    return jensen_gap_check(v, V, W, p, g).margin, g.mu.weights, v, p


def _groundstate_trial(rng: np.random.Generator, n: int):
    V, W = _quartic_pair()
    f = random_smooth(rng)
    coarse, fine = _pair_grids(n), _pair_grids(2 * n - 1)
    r1 = ground_state_energy_identity(f(coarse.nodes), V, W, coarse).relative_residual
    r2 = ground_state_energy_identity(f(fine.nodes), V, W, fine).relative_residual
    return r1, r2, coarse.mu.weights, f(coarse.nodes)


# -- driver ------------------------------------------------------------------

def run_suite(suite: str, trials: int | None = None, seed: int = 42, n: int = 4001) -> SuiteResult:
    """Run one property suite; ``n`` is the grid size of the proof-identity suites."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    trials = DEFAULT_TRIALS[suite] if trials is None else int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    tol = TOLERANCES[suite]
    children = np.random.SeedSequence(seed).spawn(trials)
    failures: list[Failure] = []
    details: dict = {}

    if suite == "groundstate":
        worst, worst_ratio = 0.0, math.inf
        for i, ss in enumerate(children):
            r1, r2, w, u = _groundstate_trial(np.random.default_rng(ss), n)
            ratio = r1 / r2 if r2 > 0 else math.inf
            worst, worst_ratio = max(worst, r1), min(worst_ratio, ratio)
            if r1 > tol or ratio < GROUNDSTATE_RATIO:
                failures.append(Failure(i, r1, w, u, math.nan))
        details = {"min_refinement_ratio": worst_ratio, "required_ratio": GROUNDSTATE_RATIO, "n": n}
        return SuiteResult(suite, trials, seed, tol, worst, failures, details)

    worst = math.inf if suite != "lift" else 0.0
    for i, ss in enumerate(children):
        rng = np.random.default_rng(ss)
        if suite == "jensen":
            val, w, u, q = _jensen_trial(rng, n)
        else:
            val, w, u, q = _moment_trial(suite, rng)
        if suite == "lift":
            worst = max(worst, val)
            bad = val > tol
        else:
            worst = min(worst, val)
            bad = val < -tol
        if bad:
            failures.append(Failure(i, val, np.asarray(w), np.asarray(u), q))
    return SuiteResult(suite, trials, seed, tol, worst, failures, details)

"""Variational lower bounds for the Beckner constants C_p and for C_1.

C_p(mu) is the supremum over non-constant u of

    Q_p(u) = deficit_p(u) / D(u).

Any grid function certifies ``Q_p(u) <= C_p`` for the discrete measure, so the
estimators below maximize Q_p by preconditioned gradient ascent from a fixed
list of seeds and report the best witness.  Upper bounds never come from this
module.

The ascent direction is the H^1(mu) Riesz representative of the Euclidean
gradient, s = (A + lam_1 W)^{-1} grad Q, which removes the h^{-2} stiffness of
the Dirichlet form.  In restricted mode (mean-zero functions) the direction is
projected onto {int s dmu = 0} in the same inner product.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import solve_banded

from .errors import DegenerateInputError, InvalidInputError, NumericalOverflowError
from .functionals import deficit_array, dirichlet_array, entropy_array
from .measure import GridFunction, GridMeasure
from .spectral import ConstantEstimate, gap_eigenfunction, spectral_gap

log = logging.getLogger(__name__)

MODES = ("unrestricted", "restricted")
DEFAULT_SWEEP = (1.5, 1.25, 1.1, 1.05, 1.02)
#: successive-ratio threshold for the bounded/divergent heuristic
DIVERGENCE_RATIO = 1.2
DEGENERATE_DIRICHLET = 1e-14
MAX_ITER = 10_000
RTOL = 1e-8


# -- objective functions ------------------------------------------------------

def _dirichlet_grad(mu: GridMeasure, u: np.ndarray) -> np.ndarray:
    c = mu.mid_density / mu.h
    flux = c * np.diff(u)
    g = np.zeros_like(u)
    g[:-1] -= flux
    g[1:] += flux
    return 2.0 * g


def _beckner_numerator(w: np.ndarray, u: np.ndarray, p: float, with_grad: bool):
    a = np.abs(u)
    q = 2.0 / p
    aq = a**q
    mq = float(w @ aq)
    num = (float(w @ (a * a)) - mq**p) / (p - 1.0)
    if not with_grad:
        return num, None
    # d/du |u|^q = q sign(u) |u|^(q-1); q - 1 >= 0 so u = 0 contributes 0
    with np.errstate(divide="ignore", invalid="ignore"):
        pw = np.where(a > 0, aq / np.where(a > 0, a, 1.0), 0.0)
    grad = 2.0 * w * (u - mq ** (p - 1.0) * np.sign(u) * pw) / (p - 1.0)
    return num, grad


def _entropy_numerator(w: np.ndarray, u: np.ndarray, with_grad: bool):
    num = entropy_array(w, u)
    if not with_grad:
        return num, None
    u2 = u * u
    s = float(w @ u2)
    with np.errstate(divide="ignore"):
        logu2 = np.where(u2 > 0, np.log(np.where(u2 > 0, u2, 1.0)), 0.0)
    grad = 2.0 * w * u * (logu2 - math.log(s))
    return num, grad


def _quotient(mu: GridMeasure, numerator, u: np.ndarray, with_grad: bool = True):
    num, dnum = numerator(mu.weights, u, with_grad)
    den = dirichlet_array(mu, u)
    if den <= 0.0:
        return -math.inf, None
    val = num / den
    if not with_grad:
        return val, None
    return val, (dnum - val * _dirichlet_grad(mu, u)) / den


def quotient_gradient(u: GridFunction, p: float | None) -> np.ndarray:
    """Euclidean gradient of u -> Q_p(u) in the grid values (p=None: entropy quotient)."""
    numerator = _entropy_numerator if p is None else _numerator_for(p)
    val, g = _quotient(u.measure, numerator, u.values)
    if g is None:
        raise DegenerateInputError("constant function has no quotient")
    return g


def _numerator_for(p: float):
    p = float(p)
    return lambda w, u, with_grad: _beckner_numerator(w, u, p, with_grad)


def beckner_quotient(u: GridFunction, p: float) -> float:
    """beckner_deficit(u, p) / dirichlet(u)."""
    p = float(p)
    if not 1.0 < p <= 2.0:
        raise InvalidInputError(f"p must lie in (1, 2] (got {p})")
    den = dirichlet_array(u.measure, u.values)
    if den <= DEGENERATE_DIRICHLET:
        raise DegenerateInputError("u is (numerically) constant: dirichlet energy vanishes")
    return deficit_array(u.measure.weights, u.values, p) / den


def entropy_quotient(u: GridFunction) -> float:
    den = dirichlet_array(u.measure, u.values)
    if den <= DEGENERATE_DIRICHLET:
        raise DegenerateInputError("u is (numerically) constant: dirichlet energy vanishes")
    return entropy_array(u.measure.weights, u.values) / den


# -- preconditioned ascent ---------------------------------------------------

class _Preconditioner:
    def __init__(self, mu: GridMeasure, shift: float):
        c = mu.mid_density / mu.h
        n = mu.n
        ab = np.zeros((3, n))
        ab[1] = shift * mu.weights
        ab[1, :-1] += c
        ab[1, 1:] += c
        ab[0, 1:] = -c
        ab[2, :-1] = -c
        # floor keeps the matrix SPD where weights underflow
        ab[1] = np.maximum(ab[1], 1e-300)
        self.ab = ab
        self.w = mu.weights
        self._pw = None

    def solve(self, r: np.ndarray) -> np.ndarray:
        return solve_banded((1, 1), self.ab, r, check_finite=False)

    def project_mean_zero(self, s: np.ndarray) -> np.ndarray:
        """P-orthogonal projection of s onto {w . s = 0}."""
        if self._pw is None:
            self._pw = self.solve(self.w)
        return s - (self.w @ s) / (self.w @ self._pw) * self._pw


@dataclass
class AscentResult:
    witness: np.ndarray
    value: float
    start_value: float
    iterations: int
    converged: bool


def _normalize(mu: GridMeasure, u: np.ndarray) -> np.ndarray:
    s = math.sqrt(float(mu.weights @ (u * u)))
    if not math.isfinite(s) or s == 0.0:
        raise NumericalOverflowError("iterate has zero or non-finite L2 norm", s)
    return u / s


def _ascend(
    mu: GridMeasure,
    numerator,
    u0: np.ndarray,
    pre: _Preconditioner,
    restricted: bool,
    max_iter: int = MAX_ITER,
    rtol: float = RTOL,
) -> AscentResult:
    w = mu.weights
    u = u0 - float(w @ u0) if restricted else u0.copy()
    u = _normalize(mu, u)
    val, grad = _quotient(mu, numerator, u)
    start = val
    step = 1.0
    converged = False
    it = 0
    d = prev_g = prev_gs = None
    for it in range(1, max_iter + 1):
        if not math.isfinite(val):
            raise NumericalOverflowError("non-finite quotient", float(np.linalg.norm(u)))
        s = pre.solve(grad)
        if restricted:
            s = pre.project_mean_zero(s)
        gs = float(grad @ s)
        if not gs > 0.0:
            converged = True
            break
        # Polak-Ribiere+ conjugate direction in the preconditioned metric
        if d is not None:
            beta = max(0.0, float((grad - prev_g) @ s) / prev_gs)
            d = s + beta * d
            if not float(grad @ d) > 0.0:
                d = s
        else:
            d = s
        prev_g, prev_gs = grad, gs
        s = d
        slope = float(grad @ s)
        t = step
        accepted = False
        while t > 1e-14:
            cand = u + t * s
            if restricted:
                cand -= float(w @ cand)
            cand = _normalize(mu, cand)
            cval, _ = _quotient(mu, numerator, cand, with_grad=False)
            if math.isfinite(cval) and cval >= val + 1e-4 * t * slope:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            converged = True
            break
        improvement = (cval - val) / abs(val) if val != 0 else math.inf
        u = cand
        val, grad = _quotient(mu, numerator, u)
        step = min(2.0 * t, 1e6)
        if improvement < rtol:
            converged = True
            break
    return AscentResult(u, val, start, it, converged)


# -- seeds ------------------------------------------------------------------

EPS_SEEDS = (1e-2, 1e-1, 1.0)
EXP_SEEDS = (0.1, -0.1, 0.5, -0.5, 1.0, -1.0)


def default_seeds(mu: GridMeasure, restricted: bool) -> list[tuple[str, np.ndarray]]:
    """Seed functions in their fixed order (ties in the result go to the first)."""
    x = mu.nodes
    w = mu.weights
    v = gap_eigenfunction(mu).values
    seeds: list[tuple[str, np.ndarray]] = []
    for eps in EPS_SEEDS:
        seeds.append((f"1+{eps:g}*v_gap", 1.0 + eps * v))
    for a in EXP_SEEDS:
        # shift the exponent so the largest value is e^0; the quotient is scale invariant
        e = a * x
        seeds.append((f"exp({a:g}x)", np.exp(e - e.max())))
    m2 = float(w @ x**2)
    seeds += [("1", np.ones_like(x)), ("x", x.copy()), ("x^2-m2", x**2 - m2)]
    if restricted:
        seeds = [(name, s - float(w @ s)) for name, s in seeds]
    return seeds


def _run_seeds(
    mu: GridMeasure,
    numerator,
    restricted: bool,
    extra_seeds: Iterable[GridFunction | np.ndarray] | None,
    max_iter: int,
):
    seeds = default_seeds(mu, restricted)
    for i, s in enumerate(extra_seeds or ()):
        vals = s.values if isinstance(s, GridFunction) else np.asarray(s, dtype=float)
        if vals.shape != mu.nodes.shape:
            raise InvalidInputError("extra seed does not match the grid")
        if restricted:
            vals = vals - float(mu.weights @ vals)
        seeds.append((f"extra[{i}]", vals))

    lam1 = 1.0 / spectral_gap(mu).value
    pre = _Preconditioner(mu, lam1 if math.isfinite(lam1) and lam1 > 0 else 1.0)

    best: AscentResult | None = None
    best_name = None
    per_seed = []
    seen: list[np.ndarray] = []
    for name, s in seeds:
        if dirichlet_array(mu, s) / max(float(mu.weights @ (s * s)), 1e-300) <= DEGENERATE_DIRICHLET:
            per_seed.append({"seed": name, "status": "degenerate"})
            continue
        if any(np.array_equal(s, t) for t in seen):
            per_seed.append({"seed": name, "status": "duplicate"})
            continue
        seen.append(s)
        res = _ascend(mu, numerator, s, pre, restricted, max_iter=max_iter)
        per_seed.append(
            {
                "seed": name,
                "status": "ok",
                "start": res.start_value,
                "value": res.value,
                "iterations": res.iterations,
                "converged": res.converged,
            }
        )
        if best is None or res.value > best.value:
            best, best_name = res, name
    if best is None:
        raise DegenerateInputError("all seeds are degenerate")
    return best, best_name, per_seed


def estimate_cp(
    mu: GridMeasure,
    p: float,
    mode: str = "unrestricted",
    *,
    extra_seeds: Sequence[GridFunction | np.ndarray] | None = None,
    max_iter: int = MAX_ITER,
) -> ConstantEstimate:
    """Best Beckner quotient found by ascent: a certified lower bound on C_p(mu)."""
    p = float(p)
    if not 1.0 < p <= 2.0:
        raise InvalidInputError(f"p must lie in (1, 2] (got {p})")
    if mode not in MODES:
        raise InvalidInputError(f"mode must be one of {MODES}")
    restricted = mode == "restricted"
    best, name, per_seed = _run_seeds(mu, _numerator_for(p), restricted, extra_seeds, max_iter)
    witness = GridFunction(mu, best.witness)
    value = beckner_quotient(witness, p)
    return ConstantEstimate(
        kind="Cp",
        value=value,
        method="variational_lower",
        p=p,
        grid=mu.metadata(),
        witness=witness,
        details={"mode": mode, "best_seed": name, "seeds": per_seed},
    )


def divergence_flag(values: Sequence[float]) -> tuple[str, list[float]]:
    """Heuristic: "bounded" if the last successive ratio along the p -> 1 sweep
    is below DIVERGENCE_RATIO, else "divergent"."""
    ratios = [b / a for a, b in zip(values, values[1:])]
    if not ratios:
        return "undetermined", ratios
    return ("bounded" if ratios[-1] < DIVERGENCE_RATIO else "divergent"), ratios


def estimate_c1_entropy(
    mu: GridMeasure,
    *,
    sweep_p: Sequence[float] | None = DEFAULT_SWEEP,
    extra_seeds: Sequence[GridFunction | np.ndarray] | None = None,
    max_iter: int = MAX_ITER,
) -> ConstantEstimate:
    """Lower bound on the log-Sobolev constant C_1(mu), plus the p -> 1 sweep
    of Beckner estimates with a bounded/divergent heuristic flag."""
    best, name, per_seed = _run_seeds(mu, _entropy_numerator, False, extra_seeds, max_iter)
    witness = GridFunction(mu, best.witness)
    value = entropy_quotient(witness)
    details: dict = {"best_seed": name, "seeds": per_seed}
    flags: list[str] = []
    if sweep_p:
        sweep = [estimate_cp(mu, p, extra_seeds=extra_seeds, max_iter=max_iter) for p in sweep_p]
        vals = [c.value for c in sweep]
        flag, ratios = divergence_flag(vals)
        details["sweep"] = {
            "p": list(map(float, sweep_p)),
            "cp": vals,
            "ratios": ratios,
            "flag": flag,
            "heuristic": f"last successive ratio < {DIVERGENCE_RATIO} => bounded",
        }
        flags.append(flag)
    return ConstantEstimate(
        kind="C1",
        value=value,
        method="variational_lower",
        p=1.0,
        grid=mu.metadata(),
        witness=witness,
        details=details,
        flags=flags,
    )

"""Poincare constant C_2 = 1 / (spectral gap) of the weighted Neumann problem.

The discrete Dirichlet form D(u) = u^T A u (see :mod:`sobolevlab.measure`)
and the mass matrix W = diag(w) give the generalized problem A u = lam W u.
With y = W^{1/2} u this becomes the symmetric tridiagonal problem

    S = W^{-1/2} A W^{-1/2},

whose entries are ratios of densities and are formed in log space.  Constants
lie in the kernel of A exactly, so lam_0 = 0 up to round-off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DiscretizationError, InvalidInputError
from .measure import GridFunction, GridMeasure
from .potential import PotentialSpec, bakry_emery_lambda1

MIN_SPECTRAL_NODES = 64
LAMBDA0_TOL = 1e-6
GAP_FLOOR = 1e-10


@dataclass
class ConstantEstimate:
    """A functional-inequality constant together with how it was obtained.

    ``side`` says where the number sits relative to the optimal constant:
    ``"lower"`` for variational witnesses, ``"upper"`` for theorem bounds and
    ``"estimate"`` for discretized exact computations.
    """

    kind: str
    value: float
    method: str
    residual: float = math.nan
    p: float | None = None
    grid: dict = field(default_factory=dict)
    witness: GridFunction | None = field(default=None, repr=False)
    details: dict = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    @property
    def side(self) -> str:
        if self.method == "variational_lower":
            return "lower"
        if self.method in ("theorem1_bound", "bakry_emery"):
            return "upper"
        return "estimate"

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "value": self.value,
            "method": self.method,
            "side": self.side,
            "residual": self.residual,
            "flags": list(self.flags),
        }
        if self.p is not None:
            out["p"] = self.p
        if self.grid:
            out["grid"] = self.grid
        if self.details:
            out["details"] = self.details
        return out


def generator_matrix(mu: GridMeasure) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of S = W^{-1/2} A W^{-1/2}."""
    h = mu.h
    n = mu.n
    lcell = np.full(n, math.log(h))
    lcell[0] = lcell[-1] = math.log(0.5 * h)
    lw = mu.log_density + lcell  # log w_i up to the common normalization
    lc = mu.mid_log_density - math.log(h)  # log of rho_{i+1/2} / h
    diag = np.zeros(n)
    diag[:-1] += np.exp(lc - lw[:-1])
    diag[1:] += np.exp(lc - lw[1:])
    off = -np.exp(lc - 0.5 * (lw[:-1] + lw[1:]))
    return diag, off


def _solve_bottom(mu: GridMeasure):
    cached = mu._cache.get("spectral")
    if cached is not None:
        return cached
    if mu.n < MIN_SPECTRAL_NODES:
        raise InvalidInputError(f"spectral gap needs n >= {MIN_SPECTRAL_NODES} (got {mu.n})")
    d, e = generator_matrix(mu)
    # LAPACK stebz (Sturm-sequence bisection) + stein (inverse iteration)
    lam, vec = eigh_tridiagonal(d, e, select="i", select_range=(0, 1), lapack_driver="stebz")
    if abs(lam[0]) > LAMBDA0_TOL:
        raise DiscretizationError(f"lowest eigenvalue {lam[0]:.3e} is not 0: constants left the kernel")
    y = vec[:, 1]
    sy = np.empty_like(y)
    sy[:] = d * y
    sy[:-1] += e * y[1:]
    sy[1:] += e * y[:-1]
    residual = float(np.linalg.norm(sy - lam[1] * y))
    out = (float(lam[0]), float(lam[1]), y, residual)
    mu._cache["spectral"] = out
    return out


def spectral_gap(mu: GridMeasure) -> ConstantEstimate:
    """C_2(mu) = 1 / lambda_1 of the discrete weighted Neumann Laplacian."""
    lam0, lam1, _, residual = _solve_bottom(mu)
    flags = []
    if lam1 < GAP_FLOOR:
        flags.append("gap_too_small")
        value = math.inf
    else:
        value = 1.0 / lam1
    return ConstantEstimate(
        kind="C2",
        value=value,
        method="eigensolve",
        residual=residual,
        grid=mu.metadata(),
        details={"lambda0": lam0, "lambda1": lam1},
        flags=flags,
        witness=gap_eigenfunction(mu),
    )


def gap_eigenfunction(mu: GridMeasure) -> GridFunction:
    """Eigenfunction of lambda_1 with int v^2 dmu = 1, int v dmu = 0 and v(x_max) > 0."""
    _, _, y, _ = _solve_bottom(mu)
    w = mu.weights
    pos = w > 0
    v = np.zeros_like(y)
    v[pos] = y[pos] / np.sqrt(w[pos])
    v = v - float(w @ v)
    v /= math.sqrt(float(w @ (v * v)))
    if v[-1] < 0:
        v = -v
    return GridFunction(mu, v)


def bakry_emery_bound(V: PotentialSpec, p: float) -> ConstantEstimate:
    """2 / (p lambda_1) with lambda_1 = inf V''; +inf when lambda_1 <= 0."""
    p = float(p)
    if not 1.0 <= p <= 2.0:
        raise InvalidInputError(f"p must lie in [1, 2] (got {p})")
    curv = bakry_emery_lambda1(V)
    details = {"lambda1": curv.value, "attained": curv.attained, "note": curv.note}
    if curv.value <= 0.0:
        return ConstantEstimate("Cp_bound", math.inf, "bakry_emery", p=p, details=details, flags=["not_applicable"])
    return ConstantEstimate("Cp_bound", 2.0 / (p * curv.value), "bakry_emery", p=p, details=details)

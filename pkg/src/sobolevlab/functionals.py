"""Functionals entering the Poincare, Beckner and log-Sobolev inequalities.

All functionals act on the discrete probability measure exactly, so Jensen-
and Holder-type facts (deficit >= 0, entropy >= 0) hold without tolerance
beyond round-off.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateInputError, InvalidInputError
from .measure import GridFunction, GridMeasure


def dirichlet_array(mu: GridMeasure, u: np.ndarray) -> float:
    du = np.diff(u)
    return float(mu.mid_density @ (du * du)) / mu.h


def dirichlet(u: GridFunction) -> float:
    """Discrete int |u'|^2 dmu: squared forward differences weighted by the
    midpoint density (the same form as the spectral-gap matrix)."""
    return dirichlet_array(u.measure, u.values)


def variance(u: GridFunction) -> float:
    w = u.measure.weights
    m = float(w @ u.values)
    # centred form avoids cancellation for nearly constant u
    d = u.values - m
    return float(w @ (d * d))


def _check_p(p: float) -> float:
    p = float(p)
    if not 1.0 < p <= 2.0:
        raise InvalidInputError(f"p must lie in (1, 2] (got {p})")
    return p


def _scaled(u: np.ndarray) -> tuple[np.ndarray, float]:
    # both functionals are 2-homogeneous; working with u / max|u| avoids under- and overflow
    top = float(np.max(np.abs(u))) if u.size else 0.0
    return (u / top, top) if top > 0 else (u, 1.0)


def deficit_array(w: np.ndarray, u: np.ndarray, p: float) -> float:
    a, top = _scaled(np.abs(u))
    second = float(w @ (a * a))
    q = 2.0 / p
    mq = float(w @ a**q)
    return top * top * (second - mq**p) / (p - 1.0)


def beckner_deficit(u: GridFunction, p: float) -> float:
    """(1/(p-1)) [int u^2 dmu - (int |u|^(2/p) dmu)^p]."""
    return deficit_array(u.measure.weights, u.values, _check_p(p))


def entropy_array(w: np.ndarray, u: np.ndarray) -> float:
    u, top = _scaled(u)
    u2 = u * u
    s = float(w @ u2)
    if s == 0.0:
        raise DegenerateInputError("entropy of the zero function is undefined")
    nz = u2 > 0
    return top * top * float(w[nz] @ (u2[nz] * (np.log(u2[nz]) - np.log(s))))


def log_sobolev_entropy(u: GridFunction) -> float:
    """int u^2 log(u^2 / ||u||_2^2) dmu, with 0 log 0 = 0."""
    return entropy_array(u.measure.weights, u.values)


def second_moment(u: GridFunction) -> float:
    return float(u.measure.weights @ (u.values * u.values))


__all__ = [
    "dirichlet",
    "variance",
    "beckner_deficit",
    "log_sobolev_entropy",
    "second_moment",
    "dirichlet_array",
    "deficit_array",
    "entropy_array",
]

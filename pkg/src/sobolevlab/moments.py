"""Moment inequalities that lift mean-zero inequalities to all functions.

Every check works on a finite probability vector, so each inequality holds
exactly up to round-off.  Inputs may be a GridMeasure with a GridFunction or
plain arrays of weights and values.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateInputError, InvalidInputError
from .measure import GridFunction, GridMeasure


def _wu(mu, u) -> tuple[np.ndarray, np.ndarray]:
    w = mu.weights if isinstance(mu, GridMeasure) else np.asarray(mu, dtype=float)
    if isinstance(u, GridFunction):
        if isinstance(mu, GridMeasure) and u.measure is not mu:
            raise InvalidInputError("function is bound to a different measure")
        u = u.values
    u = np.asarray(u, dtype=float)
    if w.shape != u.shape:
        raise InvalidInputError(f"weights {w.shape} and values {u.shape} differ in shape")
    if np.any(w < 0) or not np.isclose(w.sum(), 1.0, rtol=0, atol=1e-12):
        raise InvalidInputError("weights must be nonnegative and sum to 1")
    return w, u


def _unit(u: np.ndarray) -> tuple[np.ndarray, float]:
    """u / max|u| and max|u|; every gap below is homogeneous in u."""
    top = float(np.max(np.abs(u))) if u.size else 0.0
    return (u / top, top) if top > 0 else (u, 1.0)


def _moment(w, a, q) -> float:
    return float(w @ np.abs(a) ** q)


def lemma4_gap(mu, u, q: float) -> float:
    """(int |u|^q)^{2/q} - |u_bar|^2 - (q-1)(int |u - u_bar|^q)^{2/q} for q in [1, 2]."""
    q = float(q)
    if not 1.0 <= q <= 2.0:
        raise InvalidInputError(f"q must lie in [1, 2] (got {q})")
    w, u = _wu(mu, u)
    u, top = _unit(u)
    ub = float(w @ u)
    v = u - ub
    return top * top * (_moment(w, u, q) ** (2.0 / q) - ub * ub - (q - 1.0) * _moment(w, v, q) ** (2.0 / q))


def remark1_gap(mu, u, q: float, side: str) -> float:
    """Slack of int |u|^q against |u_bar|^q + q(q-1)/2 ||u||_q^{q-2} ||u - u_bar||_q^2.

    ``side="upper_q_ge_2"``: the right side dominates (q >= 2).
    ``side="lower_q_le_2"``: the left side dominates (1 < q <= 2).
    """
    q = float(q)
    if side == "upper_q_ge_2":
        if q < 2.0:
            raise InvalidInputError(f"upper side needs q >= 2 (got {q})")
    elif side == "lower_q_le_2":
        if not 1.0 < q <= 2.0:
            raise InvalidInputError(f"lower side needs q in (1, 2] (got {q})")
    else:
        raise InvalidInputError(f"unknown side {side!r}")
    w, u = _wu(mu, u)
    u, top = _unit(u)
    mq = _moment(w, u, q)
    if mq == 0.0:
        raise DegenerateInputError("u vanishes identically")
    ub = float(w @ u)
    v = u - ub
    norm_u = mq ** (1.0 / q)
    norm_v = _moment(w, v, q) ** (1.0 / q)
    rhs = abs(ub) ** q + 0.5 * q * (q - 1.0) * norm_u ** (q - 2.0) * norm_v**2
    return top**q * (rhs - mq if side == "upper_q_ge_2" else mq - rhs)


def remark2_gap(mu, u, q: float) -> float:
    """|u_bar|^2 + (q-1)(int |u - u_bar|^q)^{2/q} - (int |u|^q)^{2/q} for q > 2."""
    q = float(q)
    if not q > 2.0:
        raise InvalidInputError(f"q must exceed 2 (got {q})")
    w, u = _wu(mu, u)
    u, top = _unit(u)
    ub = float(w @ u)
    v = u - ub
    return top * top * (ub * ub + (q - 1.0) * _moment(w, v, q) ** (2.0 / q) - _moment(w, u, q) ** (2.0 / q))


def theorem1_lift_identity(mu, u, p: float) -> float:
    """Residual of  V2 - (2/p - 1) M = 2(p-1)/p V2 + (2-p)/p (V2 - M)
    with v = u - u_bar, V2 = int v^2 and M = (int |v|^{2/p})^p."""
    p = float(p)
    if not 1.0 < p < 2.0:
        raise InvalidInputError(f"p must lie in (1, 2) (got {p})")
    w, u = _wu(mu, u)
    v = u - float(w @ u)
    v2 = float(w @ (v * v))
    m = _moment(w, v, 2.0 / p) ** p
    lhs = v2 - (2.0 / p - 1.0) * m
    rhs = 2.0 * (p - 1.0) / p * v2 + (2.0 - p) / p * (v2 - m)
    return lhs - rhs

"""Discrete probability measures on uniform grids and functions on them.

A :class:`GridMeasure` carries trapezoid weights ``w_i`` (summing to one) at
the nodes and the normalized density at cell midpoints.  The midpoint
densities define the discrete Dirichlet form

    D(u) = sum_i rho_{i+1/2} (u_{i+1} - u_i)^2 / h,

which has exactly the constants as its kernel.  Everything is computed from
log-densities so that steep potentials never produce 0/0.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate as _quad
from scipy.optimize import brentq

from .errors import InvalidInputError, MixedMeasureError, NonNormalizableError
from .potential import PotentialSpec

#: e^{-V} at an auto-domain endpoint is below this fraction of its maximum.
AUTO_DENSITY_RATIO = 1e-18
LOG_DROP = -math.log(AUTO_DENSITY_RATIO)
DEFAULT_N = 4001
MIN_NODES = 16


@dataclass(frozen=True, eq=False)
class GridMeasure:
    potential: PotentialSpec
    nodes: np.ndarray
    weights: np.ndarray
    mid_density: np.ndarray
    log_density: np.ndarray
    mid_log_density: np.ndarray
    log_norm: float
    domain: tuple[float, float]
    tail_mass: float
    flags: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def h(self) -> float:
        return float(self.nodes[1] - self.nodes[0])

    def normalized_potential(self, x) -> np.ndarray:
        """V(x) + log Z_V, the exact log-density of this probability measure."""
        return self.potential.value(x) + self.log_norm

    def function(self, f: Callable[[np.ndarray], np.ndarray] | np.ndarray) -> "GridFunction":
        vals = f(self.nodes) if callable(f) else f
        return GridFunction(self, np.broadcast_to(np.asarray(vals, dtype=float), self.nodes.shape).copy())

    def metadata(self) -> dict:
        return {
            "potential": self.potential.render(),
            "n": self.n,
            "h": self.h,
            "domain": list(self.domain),
            "tail_mass": self.tail_mass,
            "log_norm": self.log_norm,
            "flags": list(self.flags),
        }

    def __repr__(self) -> str:
        a, b = self.domain
        return f"GridMeasure({self.potential.render()}, n={self.n}, domain=[{a:.6g}, {b:.6g}])"


class GridFunction:
    """Values on the nodes of one GridMeasure."""

    __slots__ = ("measure", "values")
    __array_priority__ = 100

    def __init__(self, measure: GridMeasure, values):
        values = np.asarray(values, dtype=float)
        if values.shape != measure.nodes.shape:
            raise InvalidInputError(f"expected {measure.n} values, got shape {values.shape}")
        self.measure = measure
        self.values = values

    @property
    def x(self) -> np.ndarray:
        return self.measure.nodes

    def _other(self, other):
        if isinstance(other, GridFunction):
            if other.measure is not self.measure:
                raise MixedMeasureError("grid functions are bound to different measures")
            return other.values
        return other

    def __add__(self, other):
        return GridFunction(self.measure, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GridFunction(self.measure, self.values - self._other(other))

    def __rsub__(self, other):
        return GridFunction(self.measure, self._other(other) - self.values)

    def __mul__(self, other):
        return GridFunction(self.measure, self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return GridFunction(self.measure, self.values / self._other(other))

    def __neg__(self):
        return GridFunction(self.measure, -self.values)

    def __abs__(self):
        return GridFunction(self.measure, np.abs(self.values))

    def __pow__(self, q):
        return GridFunction(self.measure, self.values**q)

    def __repr__(self) -> str:
        return f"GridFunction(n={self.values.size}, on {self.measure!r})"

    def to_csv(self, path: str | Path) -> None:
        write_grid_function(self, path)


# -- construction ------------------------------------------------------------

def _outer_crossing(V: PotentialSpec, x0: float, level: float, direction: int) -> float:
    """Outermost point beyond x0 where V reaches ``level``, moving in ``direction``."""
    start = x0
    if V.family == "poly":
        crit = V.critical_points()
        start = max(crit) if direction > 0 else min(crit)
        start = max(start, x0) if direction > 0 else min(start, x0)
    if V.value(start) >= level:
        return float(start)
    step = 1.0
    for _ in range(200):
        far = start + direction * step
        if V.value(far) >= level:
            lo, hi = sorted((start, far))
            return float(brentq(lambda t: float(V.value(t)) - level, lo, hi, xtol=1e-13, rtol=1e-15))
        step *= 2.0
    raise NonNormalizableError(f"e^-V does not decay along direction {direction:+d}")


def auto_domain(V: PotentialSpec) -> tuple[float, float]:
    """Interval around argmin V on which e^{-V} stays above 1e-18 of its maximum."""
    if V.family == "table":
        return V.support
    x0 = V.minimizer()
    level = float(V.value(x0)) + LOG_DROP
    return _outer_crossing(V, x0, level, -1), _outer_crossing(V, x0, level, +1)


def _tail_mass(V: PotentialSpec, a: float, b: float, vmin: float) -> float:
    """Unnormalized mass of e^{-(V - vmin)} outside [a, b]."""
    total = 0.0
    for end, outward in ((b, 1.0), (a, -1.0)):
        if V.family == "table" and end in V.support:
            slope = float(V.grad(end)) * outward
            if slope <= 0:
                raise NonNormalizableError(
                    f"tabulated potential does not increase outward at x = {end!r} (tail slope {slope:.3g})"
                )
        slope = float(V.grad(end)) * outward
        dens = math.exp(-(float(V.value(end)) - vmin))
        if slope > 0:
            total += dens / slope
        elif V.closed_form:
            lim = (end, math.inf) if outward > 0 else (-math.inf, end)
            val, _ = _quad.quad(lambda t: math.exp(-(float(V.value(t)) - vmin)), *lim, limit=200)
            total += val
        else:
            raise NonNormalizableError(f"non-decaying density at x = {end!r}")
    return total


def build_measure(
    V: PotentialSpec,
    n: int = DEFAULT_N,
    domain: tuple[float, float] | str | None = "auto",
    *,
    tail_tol: float = 1e-12,
) -> GridMeasure:
    """Normalized trapezoid discretization of e^{-V} dx on n uniform nodes."""
    if n < MIN_NODES:
        raise InvalidInputError(f"n must be >= {MIN_NODES} (got {n})")
    auto = domain is None or domain == "auto"
    a, b = auto_domain(V) if auto else map(float, domain)
    if not b > a:
        raise InvalidInputError(f"empty domain [{a}, {b}]")
    lo, hi = V.support
    if a < lo or b > hi:
        raise InvalidInputError(f"domain [{a}, {b}] exceeds the tabulated range [{lo}, {hi}]")

    x = np.linspace(a, b, n)
    h = (b - a) / (n - 1)
    mids = 0.5 * (x[:-1] + x[1:])
    v = V.value(x)
    vm = V.value(mids)
    vmin = float(min(v.min(), vm.min()))

    cell = np.full(n, h)
    cell[0] = cell[-1] = 0.5 * h
    raw = cell * np.exp(-(v - vmin))
    total = float(raw.sum())
    log_norm = -vmin + math.log(total)
    # midpoint density sits in the same normalization as the weights
    log_density = -v - log_norm
    mid_log_density = -vm - log_norm
    with np.errstate(under="ignore"):
        weights = raw / total
        mid_density = np.exp(mid_log_density)

    flags: list[str] = []
    tail = _tail_mass(V, a, b, vmin) / total
    if tail > tail_tol:
        if auto:
            raise NonNormalizableError(f"estimated tail mass {tail:.3g} exceeds tolerance {tail_tol:.3g}")
        flags.append("tail_mass_above_tolerance")
    if np.any(weights == 0.0):
        flags.append("weight_underflow")
    if V.singular_points and any(a <= s <= b for s in V.singular_points):
        flags.append("singular_cell_skipped")

    return GridMeasure(
        potential=V,
        nodes=x,
        weights=weights,
        mid_density=mid_density,
        log_density=log_density,
        mid_log_density=mid_log_density,
        log_norm=log_norm,
        domain=(float(a), float(b)),
        tail_mass=tail,
        flags=tuple(flags),
    )


# -- integrals -----------------------------------------------------------------

def integrate(f: GridFunction) -> float:
    return float(f.measure.weights @ f.values)


def mean(f: GridFunction) -> float:
    return integrate(f)


def lq_norm(f: GridFunction, q: float) -> float:
    """(sum_i w_i |f_i|^q)^(1/q); q = inf gives max |f_i| over nodes with positive weight."""
    q = float(q)
    a = np.abs(f.values)
    if math.isinf(q) and q > 0:
        w = f.measure.weights
        return float(a[w > 0].max())
    if not q >= 1:
        raise InvalidInputError(f"q must be >= 1 or inf (got {q})")
    return float(f.measure.weights @ a**q) ** (1.0 / q)


def derivative(f: GridFunction) -> GridFunction:
    """Central differences inside, second-order one-sided at the two ends."""
    u = f.values
    if u.size < 3:
        raise InvalidInputError("need at least 3 nodes")
    h = f.measure.h
    d = np.empty_like(u)
    d[1:-1] = (u[2:] - u[:-2]) / (2 * h)
    d[0] = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h)
    d[-1] = (3 * u[-1] - 4 * u[-2] + u[-3]) / (2 * h)
    return GridFunction(f.measure, d)


# -- CSV ---------------------------------------------------------------------

def write_grid_function(f: GridFunction, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["x", "value"])
        for xi, ui in zip(f.measure.nodes, f.values):
            w.writerow([repr(float(xi)), repr(float(ui))])


def read_grid_function(path: str | Path, measure: GridMeasure) -> GridFunction:
    xs, us = [], []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["x", "value"]:
        raise InvalidInputError(f"{path}: expected header 'x,value'")
    for row in rows[1:]:
        if not row:
            continue
        xs.append(float(row[0]))
        us.append(float(row[1]))
    xs = np.asarray(xs)
    if xs.shape != measure.nodes.shape or not np.array_equal(xs, measure.nodes):
        raise InvalidInputError(f"{path}: nodes do not match the measure's grid")
    return GridFunction(measure, np.asarray(us))

"""Potential families V for one-dimensional measures e^{-V} dx.

Four families are supported:

* ``gaussian:sigma=s``      V = x^2/(2 s^2) + log(2 pi s^2)/2
* ``power:alpha=a``         V = |x|^a, a >= 1
* ``poly:2=c2,4=c4,...``    V = sum_k c_k x^k, even leading degree, positive leading coefficient
* ``table:path.csv``        natural cubic spline through tabulated (x, V) pairs

All closed-form families return exact V, V' and V''.  The additive
normalization log Z_V is *not* part of a PotentialSpec; it is computed by
quadrature when a grid is attached (see :mod:`sobolevlab.measure`).
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicSpline

from . import asymptotics
from .errors import InsufficientDataError, InvalidSpecError, SingularityError

FAMILIES = ("gaussian", "power", "poly", "table")

_KEYVAL = re.compile(r"^\s*([A-Za-z0-9_]+)\s*=\s*([^=,\s]+)\s*$")


@dataclass(frozen=True)
class PotentialSpec:
    """Immutable description of V.  Build with :func:`parse_potential` or the
    helper constructors rather than directly."""

    family: str
    sigma: float | None = None
    alpha: float | None = None
    coeffs: tuple[tuple[int, float], ...] = ()
    path: str | None = None
    table: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def __post_init__(self):
        _validate(self)

    # -- derived objects -------------------------------------------------
    @cached_property
    def _poly(self) -> Polynomial:
        deg = max(k for k, _ in self.coeffs)
        c = np.zeros(deg + 1)
        for k, v in self.coeffs:
            c[k] += v
        return Polynomial(c)

    @cached_property
    def _spline(self) -> CubicSpline:
        x, v = (np.asarray(a, dtype=float) for a in self.table)
        return CubicSpline(x, v, bc_type="natural")

    # -- evaluation ------------------------------------------------------
    def value(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.family == "gaussian":
            s2 = self.sigma**2
            return x**2 / (2 * s2) + 0.5 * math.log(2 * math.pi * s2)
        if self.family == "power":
            return np.abs(x) ** self.alpha
        if self.family == "poly":
            return self._poly(x)
        return self._spline(x)

    def grad(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.family == "gaussian":
            return x / self.sigma**2
        if self.family == "power":
            a = self.alpha
            if a == 1.0:
                return np.sign(x)
            return a * np.abs(x) ** (a - 1) * np.sign(x)
        if self.family == "poly":
            return self._poly.deriv(1)(x)
        return self._spline(x, 1)

    def hess(self, x) -> np.ndarray:
        """V''.  Singular points evaluate to nan; use :func:`evaluate` for a
        checked scalar evaluation."""
        x = np.asarray(x, dtype=float)
        if self.family == "gaussian":
            return np.full_like(x, 1.0 / self.sigma**2)
        if self.family == "power":
            a = self.alpha
            if a == 2.0:
                return np.full_like(x, 2.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = a * (a - 1) * np.abs(x) ** (a - 2)
            if a < 2.0:
                out = np.where(x == 0.0, np.nan, out)
            return out
        if self.family == "poly":
            return self._poly.deriv(2)(x)
        return self._spline(x, 2)

    @property
    def singular_points(self) -> tuple[float, ...]:
        if self.family == "power" and self.alpha < 2.0:
            return (0.0,)
        return ()

    def singular_mask(self, x, h: float) -> np.ndarray:
        """Nodes lying in the symmetric cell of width h around a singular point."""
        x = np.asarray(x, dtype=float)
        mask = np.zeros(x.shape, dtype=bool)
        for s in self.singular_points:
            mask |= np.abs(x - s) < 0.5 * h * (1 + 1e-9)
        return mask

    # -- global structure ------------------------------------------------
    def minimizer(self) -> float:
        """Location of the global minimum of V."""
        if self.family in ("gaussian", "power"):
            return 0.0
        if self.family == "poly":
            crit = self.critical_points()
            return float(min(crit, key=lambda c: float(self.value(c))))
        x = np.asarray(self.table[0])
        return float(x[np.argmin(self.table[1])])

    def critical_points(self) -> list[float]:
        """Real roots of V' (poly family only)."""
        roots = self._poly.deriv(1).roots()
        return sorted(float(r.real) for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r)))

    @property
    def support(self) -> tuple[float, float]:
        if self.family == "table":
            return float(self.table[0][0]), float(self.table[0][-1])
        return -math.inf, math.inf

    def tail_terms(self, side: int) -> asymptotics.PowerSum | None:
        """V(side * r) as a finite power sum in r > 0, or None for tabulated data."""
        if self.family == "gaussian":
            s2 = self.sigma**2
            return asymptotics.add({2.0: 1 / (2 * s2)}, {0.0: 0.5 * math.log(2 * math.pi * s2)})
        if self.family == "power":
            return {float(self.alpha): 1.0}
        if self.family == "poly":
            return asymptotics.add({float(k): c * side**k for k, c in self.coeffs})
        return None

    @property
    def closed_form(self) -> bool:
        return self.family != "table"

    def render(self) -> str:
        if self.family == "gaussian":
            return f"gaussian:sigma={self.sigma!r}"
        if self.family == "power":
            return f"power:alpha={self.alpha!r}"
        if self.family == "poly":
            return "poly:" + ",".join(f"{k}={c!r}" for k, c in self.coeffs)
        return f"table:{self.path}"

    def __str__(self) -> str:
        return self.render()


def _validate(spec: PotentialSpec) -> None:
    fam = spec.family
    if fam not in FAMILIES:
        raise InvalidSpecError(f"unknown family {fam!r}; expected one of {FAMILIES}")
    if fam == "gaussian":
        if spec.sigma is None or not math.isfinite(spec.sigma) or spec.sigma <= 0:
            raise InvalidSpecError("gaussian family requires finite sigma > 0")
    elif fam == "power":
        if spec.alpha is None or not math.isfinite(spec.alpha):
            raise InvalidSpecError("power family requires a finite alpha")
        if spec.alpha < 1:
            raise InvalidSpecError(f"power family requires alpha >= 1 (got {spec.alpha!r})")
    elif fam == "poly":
        if not spec.coeffs:
            raise InvalidSpecError("poly family requires at least one degree=coefficient pair")
        degrees = [k for k, _ in spec.coeffs]
        if len(set(degrees)) != len(degrees):
            raise InvalidSpecError("duplicate degree in poly spec")
        if any(k < 0 for k in degrees):
            raise InvalidSpecError("poly degrees must be nonnegative integers")
        if any(not math.isfinite(c) for _, c in spec.coeffs):
            raise InvalidSpecError("poly coefficients must be finite")
        nonzero = [(k, c) for k, c in spec.coeffs if c != 0.0]
        if not nonzero:
            raise InvalidSpecError("poly spec has no nonzero coefficient")
        lead_deg, lead_c = max(nonzero)
        if lead_deg < 2 or lead_deg % 2 or lead_c <= 0:
            raise InvalidSpecError(
                "poly leading term must have even degree >= 2 and a positive coefficient "
                f"(got degree {lead_deg}, coefficient {lead_c!r})"
            )
    else:
        if spec.table is None:
            raise InvalidSpecError("table family requires data")
        x, v = spec.table
        if len(x) != len(v):
            raise InvalidSpecError("table columns have different lengths")
        if len(x) < 3:
            raise InsufficientDataError("tabulated potential needs at least 3 points")
        if not all(b > a for a, b in zip(x, x[1:])):
            raise InvalidSpecError("table x column must be strictly increasing")
        if not all(math.isfinite(t) for t in (*x, *v)):
            raise InvalidSpecError("table contains non-finite values")


# -- constructors ----------------------------------------------------------

def gaussian(sigma: float = 1.0) -> PotentialSpec:
    return PotentialSpec("gaussian", sigma=float(sigma))


def power(alpha: float) -> PotentialSpec:
    return PotentialSpec("power", alpha=float(alpha))


def polynomial(coeffs: dict[int, float]) -> PotentialSpec:
    return PotentialSpec("poly", coeffs=tuple(sorted((int(k), float(c)) for k, c in coeffs.items())))


def tabulated(x, v, path: str | None = None) -> PotentialSpec:
    return PotentialSpec(
        "table",
        path=path,
        table=(tuple(float(t) for t in x), tuple(float(t) for t in v)),
    )


def _parse_float(text: str, key: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise InvalidSpecError(f"value for {key!r} is not a number: {text!r}") from None
    if not math.isfinite(val):
        raise InvalidSpecError(f"value for {key!r} must be finite")
    return val


def read_table(path: str | Path) -> tuple[list[float], list[float]]:
    xs, vs = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise InvalidSpecError(f"{path}:{lineno}: expected two columns x,V")
            try:
                x, v = float(row[0]), float(row[1])
            except ValueError:
                if lineno == 1:  # header
                    continue
                raise InvalidSpecError(f"{path}:{lineno}: non-numeric entry") from None
            xs.append(x)
            vs.append(v)
    return xs, vs


def parse_potential(spec_string: str) -> PotentialSpec:
    """Parse ``family:key=value[,key=value...]`` (or ``table:<path>``)."""
    if not isinstance(spec_string, str) or ":" not in spec_string:
        raise InvalidSpecError(f"expected 'family:params', got {spec_string!r}")
    family, _, body = spec_string.partition(":")
    family = family.strip()
    if family == "table":
        path = body.strip()
        if not path:
            raise InvalidSpecError("table family requires a path")
        try:
            x, v = read_table(path)
        except OSError as exc:
            raise InvalidSpecError(f"cannot read table {path!r}: {exc}") from None
        return tabulated(x, v, path=path)
    if family not in FAMILIES:
        raise InvalidSpecError(f"unknown family {family!r}; expected one of {FAMILIES}")

    pairs: list[tuple[str, str]] = []
    for item in body.split(","):
        m = _KEYVAL.match(item)
        if not m:
            raise InvalidSpecError(f"malformed parameter {item!r} in {spec_string!r}")
        pairs.append((m.group(1), m.group(2)))
    keys = [k for k, _ in pairs]
    if len(set(keys)) != len(keys):
        raise InvalidSpecError(f"duplicate parameter in {spec_string!r}")

    if family == "poly":
        coeffs = {}
        for k, v in pairs:
            if not k.isdigit():
                raise InvalidSpecError(f"poly degree must be a nonnegative integer, got {k!r}")
            coeffs[int(k)] = _parse_float(v, k)
        return polynomial(coeffs)

    expected = {"gaussian": "sigma", "power": "alpha"}[family]
    if keys != [expected]:
        raise InvalidSpecError(f"{family} family takes exactly one parameter {expected!r}")
    val = _parse_float(pairs[0][1], expected)
    return gaussian(val) if family == "gaussian" else power(val)


def evaluate(V: PotentialSpec, x: float) -> tuple[float, float, float]:
    """(V(x), V'(x), V''(x)) at a single point; raises at singular points."""
    x = float(x)
    if x in V.singular_points:
        raise SingularityError(x)
    return float(V.value(x)), float(V.grad(x)), float(V.hess(x))


@dataclass(frozen=True)
class CurvatureBound:
    """Infimum of V'' (the Bakry-Emery curvature lambda_1)."""

    value: float
    location: float | None
    attained: bool
    note: str = ""


def bakry_emery_lambda1(V: PotentialSpec, domain: tuple[float, float] | None = None) -> CurvatureBound:
    """inf V'' over ``domain`` (the whole line when None)."""
    if domain is not None:
        a, b = map(float, domain)
        if not b > a:
            raise InvalidSpecError("domain must satisfy a < b")
    else:
        a, b = V.support

    if V.family == "gaussian":
        return CurvatureBound(1.0 / V.sigma**2, 0.0, True, "constant curvature")

    if V.family == "power":
        al = V.alpha
        if al == 2.0:
            return CurvatureBound(2.0, 0.0, True, "constant curvature")
        if al == 1.0:
            return CurvatureBound(0.0, None, True, "V'' = 0 away from the kink at 0")
        if al > 2.0:
            if a <= 0.0 <= b:
                return CurvatureBound(0.0, 0.0, True, "V''(0) = 0")
            r = min(abs(a), abs(b))
            return CurvatureBound(al * (al - 1) * r ** (al - 2), math.copysign(r, a), True)
        # 1 < alpha < 2: V'' decreases in |x|
        r = max(abs(a), abs(b))
        if math.isinf(r):
            return CurvatureBound(0.0, None, False, "tends to 0 as |x| -> inf; not attained")
        loc = b if abs(b) >= abs(a) else a
        return CurvatureBound(
            al * (al - 1) * r ** (al - 2), loc, True, "infimum at boundary, tends to 0 on the whole line"
        )

    if V.family == "poly":
        d2 = V._poly.deriv(2)
        if d2.degree() <= 0:
            return CurvatureBound(float(d2(0.0)), 0.0, True, "constant curvature")
        cand = [
            float(r.real)
            for r in d2.deriv(1).roots()
            if abs(r.imag) <= 1e-9 * max(1.0, abs(r)) and a <= r.real <= b
        ]
        cand += [t for t in (a, b) if math.isfinite(t)]
        best = min(cand, key=lambda t: float(d2(t)))
        return CurvatureBound(float(d2(best)), best, True)

    knots = np.asarray(V.table[0])
    if knots.size < 3:
        raise InsufficientDataError("need at least 3 tabulated points")
    pts = knots[(knots >= a) & (knots <= b)]
    pts = np.concatenate([pts, [t for t in (a, b) if math.isfinite(t)]])
    vals = V.hess(pts)
    i = int(np.argmin(vals))
    return CurvatureBound(float(vals[i]), float(pts[i]), True, "spline curvature (piecewise linear)")

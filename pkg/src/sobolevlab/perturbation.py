"""Perturbation bound for convex Sobolev constants.

Given mu = e^{-V} dx and a reference nu = e^{-W} dx (both normalized), write
mu = e^{-2Z} nu with Z = (V - W)/2 and let

    delta = Z'^2 - Z'' + Z' W',     m = inf delta.

If C_2(mu) and C_p(nu) are finite, Z is in L^{p'}(nu) and m > -inf, then

    C_p*  = C_p(nu) + C_2(mu) (2 ||Z||_{p'} - m C_p(nu))_+     (mean-zero functions)
    C_p  <= (2/p) C_2(mu) + (2/p - 1) C_p*.

This module evaluates every ingredient on grids, decides the two hypotheses
by a leading-order tail analysis of the closed-form potentials, and exposes
the identities used in the argument (ground-state transform, Jensen step) as
numerical checks.

Normalization convention: V and W are replaced by their exact log-densities
V + log Z_V and W + log Z_W, with log Z computed by quadrature on the shared
grid.  delta does not depend on this choice; ||Z|| does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from . import asymptotics
from .errors import InvalidInputError, ReferenceConstantUnavailable, SobolevLabError
from .measure import DEFAULT_N, LOG_DROP, GridFunction, GridMeasure, auto_domain, build_measure
from .potential import PotentialSpec, bakry_emery_lambda1, gaussian
from .spectral import ConstantEstimate, spectral_gap

DEFAULT_P_LIST = (1.5, 1.25, 1.1, 1.05, 1.02, 1.01)
DEFAULT_SIGMAS = (0.5, 0.75, 1.0, 1.5, 2.0)
#: relative difference between the nu- and mu-norms of Z that raises a flag
NORM_DISCREPANCY = 0.01
_EXP_SAFE = 300.0


# -- grids -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SharedGrids:
    """mu and nu discretized on one node set (union of auto domains, finest spacing)."""

    mu: GridMeasure
    nu: GridMeasure

    @property
    def nodes(self) -> np.ndarray:
        return self.mu.nodes

    @property
    def h(self) -> float:
        return self.mu.h

    def z_constant(self) -> float:
        return 0.5 * (self.mu.log_norm - self.nu.log_norm)

    def Z(self, x) -> np.ndarray:
        """Z = (V - W)/2 with both potentials normalized to probability densities."""
        V, W = self.mu.potential, self.nu.potential
        return 0.5 * (V.value(x) - W.value(x)) + self.z_constant()


def shared_grids(V: PotentialSpec, W: PotentialSpec, n: int = DEFAULT_N) -> SharedGrids:
    (av, bv), (aw, bw) = auto_domain(V), auto_domain(W)
    h = min((bv - av) / (n - 1), (bw - aw) / (n - 1))
    a, b = min(av, aw), max(bv, bw)
    if V.family == "table" or W.family == "table":
        lo = max(V.support[0], W.support[0])
        hi = min(V.support[1], W.support[1])
        a, b = max(a, lo), min(b, hi)
    m = int(math.ceil((b - a) / h)) + 1
    mu = build_measure(V, m, (a, b))
    nu = build_measure(W, m, (a, b))
    return SharedGrids(mu, nu)


# -- Z and delta -------------------------------------------------------------

@dataclass
class ZDelta:
    Z: GridFunction
    delta: GridFunction
    skipped: np.ndarray
    flags: list[str] = field(default_factory=list)


def compute_Z_delta(V: PotentialSpec, W: PotentialSpec, grids: SharedGrids) -> ZDelta:
    """Z and delta on the shared grid; both GridFunctions are bound to grids.nu."""
    x = grids.nodes
    Z = grids.Z(x)
    dZ = 0.5 * (V.grad(x) - W.grad(x))
    with np.errstate(invalid="ignore"):
        d2Z = 0.5 * (V.hess(x) - W.hess(x))
    delta = dZ * dZ - d2Z + dZ * W.grad(x)
    skipped = V.singular_mask(x, grids.h) | W.singular_mask(x, grids.h) | ~np.isfinite(delta)
    flags = ["singular_cell_skipped"] if skipped.any() else []
    delta = np.where(skipped, np.nan, delta)
    return ZDelta(GridFunction(grids.nu, Z), GridFunction(grids.nu, delta), skipped, flags)


def _tails(V: PotentialSpec, W: PotentialSpec, side: int):
    tv, tw = V.tail_terms(side), W.tail_terms(side)
    if tv is None or tw is None:
        return None
    z = asymptotics.scale(asymptotics.add(tv, asymptotics.scale(tw, -1.0)), 0.5)
    return z, tw


def delta_tail(V: PotentialSpec, W: PotentialSpec, side: int) -> asymptotics.PowerSum | None:
    """delta(side * r) as a power sum in r (None when a potential is tabulated)."""
    t = _tails(V, W, side)
    if t is None:
        return None
    z, w = t
    zr = asymptotics.differentiate(z)
    zrr = asymptotics.differentiate(zr)
    wr = asymptotics.differentiate(w)
    # x = side*r: the two sign flips in Z'W' and Z'^2 cancel; Z'' is even in side
    return asymptotics.add(
        asymptotics.multiply(zr, zr), asymptotics.scale(zrr, -1.0), asymptotics.multiply(zr, wr)
    )


def z_tail(V: PotentialSpec, W: PotentialSpec, side: int) -> asymptotics.PowerSum | None:
    t = _tails(V, W, side)
    return None if t is None else t[0]


def _limit_value(s: asymptotics.PowerSum) -> float:
    lead = asymptotics.leading(s)
    if lead is None or lead[0] < 0:
        return 0.0
    if lead[0] == 0:
        return lead[1]
    return math.inf if lead[1] > 0 else -math.inf


@dataclass
class DeltaInfimum:
    m: float
    location: float | None
    bounded_below: bool | None
    tail_limits: dict
    flags: list[str]


def delta_infimum(V: PotentialSpec, W: PotentialSpec, grids: SharedGrids, zd: ZDelta | None = None) -> DeltaInfimum:
    zd = zd or compute_Z_delta(V, W, grids)
    d = zd.delta.values
    ok = ~zd.skipped
    i = int(np.nanargmin(np.where(ok, d, np.nan)))
    m, loc = float(d[i]), float(grids.nodes[i])
    flags = list(zd.flags)
    limits = {}
    bounded: bool | None = True
    for side, key in ((+1, "+inf"), (-1, "-inf")):
        s = delta_tail(V, W, side)
        if s is None:
            bounded = None
            continue
        lim = _limit_value(s)
        limits[key] = lim
        if lim == -math.inf:
            bounded = False
        elif lim < m:
            m, loc = lim, None
            flags.append("infimum_approached_at_infinity")
    if bounded is None:
        flags.append("truncated_domain_infimum")
    elif bounded and loc is not None and i in (0, d.size - 1):
        flags.append("grid_minimum_at_boundary")
    if bounded is False:
        m, loc = -math.inf, None
    return DeltaInfimum(m, loc, bounded, limits, flags)


# -- norms of Z ----------------------------------------------------------------

def _extended_log_norm(grids: SharedGrids, which: str, p_prime: float) -> tuple[float, list[str]]:
    """log of int |Z|^p' d(mu or nu), on a grid widened until the integrand decays."""
    ref = grids.nu if which == "nu" else grids.mu
    pot = ref.potential
    h = grids.h
    a, b = grids.mu.domain
    lo, hi = pot.support
    flags: list[str] = []

    def logint(x):
        z = np.abs(grids.Z(x))
        with np.errstate(divide="ignore"):
            return p_prime * np.log(z) - (pot.value(x) + ref.log_norm)

    for _ in range(60):
        x = np.arange(a, b + 0.5 * h, h)
        g = logint(x)
        top = float(np.max(g))
        grow_left = g[0] > top - LOG_DROP and a > lo
        grow_right = g[-1] > top - LOG_DROP and b < hi
        if not (grow_left or grow_right):
            break
        width = b - a
        if grow_left:
            a = max(lo, a - 0.5 * width)
        if grow_right:
            b = min(hi, b + 0.5 * width)
    else:
        flags.append("z_norm_domain_not_converged")
    if g[0] > top - LOG_DROP or g[-1] > top - LOG_DROP:
        flags.append("z_norm_truncated")
    cell = np.full(x.size, h)
    cell[0] = cell[-1] = 0.5 * h
    logw = -(pot.value(x) + ref.log_norm) + np.log(cell)
    logw -= logsumexp(logw)
    return float(logsumexp(logw + g + (pot.value(x) + ref.log_norm))), flags


def z_norm(grids: SharedGrids, p_prime: float, which: str = "nu") -> tuple[float, list[str]]:
    """||Z||_{L^{p'}(nu or mu)}; p' = inf is the sup over the shared grid."""
    if math.isinf(p_prime):
        ref = grids.nu if which == "nu" else grids.mu
        z = np.abs(grids.Z(grids.nodes))
        return float(z[ref.weights > 0].max()), ["sup_over_truncated_grid"]
    lg, flags = _extended_log_norm(grids, which, p_prime)
    return math.exp(lg / p_prime), flags


def z_integrable(V: PotentialSpec, W: PotentialSpec, p_prime: float) -> bool | None:
    """Symbolic Z in L^{p'}(nu): polynomial growth against a decaying e^{-W};
    for p' = inf, Z must stay bounded."""
    out = True
    for side in (+1, -1):
        z = z_tail(V, W, side)
        if z is None:
            return None
        if math.isinf(p_prime) and not asymptotics.bounded(z):
            out = False
        lead_w = asymptotics.leading(W.tail_terms(side))
        if lead_w is None or lead_w[0] <= 0 or lead_w[1] <= 0:
            out = False
    return out


# -- reference constant --------------------------------------------------------

def reference_constant(W: PotentialSpec, p: float) -> ConstantEstimate:
    """C_p(nu): closed form for Gaussian nu, else the curvature bound 2/(p lambda_1)."""
    if W.family == "gaussian":
        return ConstantEstimate("Cp", 2.0 / p * W.sigma**2, "closed_form", p=p)
    if p == 1.0:
        raise ReferenceConstantUnavailable("C_1 of a non-Gaussian reference is not available")
    curv = bakry_emery_lambda1(W)
    if curv.value <= 0:
        raise ReferenceConstantUnavailable(
            f"reference {W.render()} has inf W'' = {curv.value!r}; no bound for C_p(nu)"
        )
    return ConstantEstimate("Cp_bound", 2.0 / (p * curv.value), "bakry_emery", p=p, details={"lambda1": curv.value})


def restricted_bound(c2_mu: float, cp_nu: float, z_norm_value: float, m: float) -> tuple[float, float]:
    """(t*, C_p*) for the mean-zero inequality; t* = C_p(nu) / C_p*."""
    cp_star = cp_nu + c2_mu * max(2.0 * z_norm_value - m * cp_nu, 0.0)
    return cp_nu / cp_star, cp_star


# -- report ------------------------------------------------------------------

REPORT_FIELDS = (
    "p",
    "p_prime",
    "z_norm_nu",
    "z_norm_mu",
    "m",
    "m_attained_at",
    "m_bounded_below",
    "c2_mu",
    "cp_nu",
    "t_star",
    "cp_star",
    "cp_bound",
    "flags",
)


@dataclass
class PerturbationReport:
    p: float
    p_prime: float
    z_norm_nu: float
    z_norm_mu: float
    m: float
    m_attained_at: float | None
    m_bounded_below: bool | None
    c2_mu: ConstantEstimate
    cp_nu: ConstantEstimate
    t_star: float | None
    cp_star: float | None
    cp_bound: float | None
    flags: list[str] = field(default_factory=list)
    z_integrable: bool | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.cp_bound is not None

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "p_prime": self.p_prime,
            "z_norm_nu": self.z_norm_nu,
            "z_norm_mu": self.z_norm_mu,
            "m": self.m,
            "m_attained_at": self.m_attained_at,
            "m_bounded_below": self.m_bounded_below,
            "c2_mu": self.c2_mu.value,
            "cp_nu": self.cp_nu.value,
            "t_star": self.t_star,
            "cp_star": self.cp_star,
            "cp_bound": self.cp_bound,
            "flags": list(self.flags),
        }


def sandwich_chain_diagnostics(p: float, c2: float, cp_star: float, cp_bound: float) -> dict:
    """Both sides of the printed sandwich chain; reported, never asserted."""
    chain = {
        "(2/p-1)C2": (2.0 / p - 1.0) * c2,
        "Cp_bound-C2": cp_bound - c2,
        "(2-p)/p*(C2-Cp_star)": (2.0 - p) / p * (c2 - cp_star),
    }
    chain["chain_holds"] = chain["(2/p-1)C2"] <= chain["Cp_bound-C2"] <= chain["(2-p)/p*(C2-Cp_star)"]
    chain["Cp_star<=C2<=Cp_bound"] = cp_star <= c2 <= cp_bound
    return chain


class _Pair:
    """The p-independent ingredients of the bound, computed once per (V, W) pair."""

    def __init__(self, V: PotentialSpec, W: PotentialSpec, n: int, grids: SharedGrids | None = None):
        self.V, self.W, self.n = V, W, n
        self.grids = grids or shared_grids(V, W, n)
        self.c2 = spectral_gap(build_measure(V, n))
        self.zd = compute_Z_delta(V, W, self.grids)
        self.inf = delta_infimum(V, W, self.grids, self.zd)

    def report(self, p: float) -> PerturbationReport:
        p = float(p)
        if not 1.0 <= p < 2.0:
            raise InvalidInputError(f"p must lie in [1, 2) (got {p})")
        p_prime = math.inf if p == 1.0 else p / (p - 1.0)
        flags = list(self.inf.flags)
        cp_nu = reference_constant(self.W, p)
        zn_nu, f1 = z_norm(self.grids, p_prime, "nu")
        zn_mu, f2 = z_norm(self.grids, p_prime, "mu")
        flags += [f"nu:{f}" for f in f1] + [f"mu:{f}" for f in f2]
        if abs(zn_nu - zn_mu) > NORM_DISCREPANCY * max(abs(zn_nu), abs(zn_mu), 1e-300):
            flags.append("z_norm_mu_nu_differ")
        integrable = z_integrable(self.V, self.W, p_prime)
        if integrable is None:
            flags.append("z_integrability_unverified")
        if integrable is False:
            flags.append("z_not_integrable")
        if self.inf.bounded_below is False:
            flags.append("m_unbounded_below")
        if not math.isfinite(self.c2.value):
            flags.append("c2_infinite")

        t_star = cp_star = cp_bound = None
        diagnostics: dict = {"c2_mu": self.c2.to_dict(), "cp_nu": cp_nu.to_dict(), "delta_tail_limits": self.inf.tail_limits}
        failed = integrable is False or self.inf.bounded_below is False or not math.isfinite(self.c2.value)
        if failed:
            flags.append("hypotheses_failed")
        else:
            flags.append("hypotheses_passed")
            t_star, cp_star = restricted_bound(self.c2.value, cp_nu.value, zn_nu, self.inf.m)
            cp_bound = 2.0 / p * self.c2.value + (2.0 / p - 1.0) * cp_star
            assert 0.0 < t_star <= 1.0
            assert cp_bound >= self.c2.value
            diagnostics["sandwich_chain"] = sandwich_chain_diagnostics(p, self.c2.value, cp_star, cp_bound)
            if not diagnostics["sandwich_chain"]["chain_holds"]:
                flags.append("sandwich_chain_not_satisfied")
        return PerturbationReport(
            p=p,
            p_prime=p_prime,
            z_norm_nu=zn_nu,
            z_norm_mu=zn_mu,
            m=self.inf.m,
            m_attained_at=self.inf.location,
            m_bounded_below=self.inf.bounded_below,
            c2_mu=self.c2,
            cp_nu=cp_nu,
            t_star=t_star,
            cp_star=cp_star,
            cp_bound=cp_bound,
            flags=flags,
            z_integrable=integrable,
            diagnostics=diagnostics,
        )


def theorem1_bound(
    V: PotentialSpec,
    W: PotentialSpec,
    p: float,
    n: int = DEFAULT_N,
    grids: SharedGrids | None = None,
) -> PerturbationReport:
    """Upper bound on C_p(mu) from C_2(mu), C_p(nu), ||Z|| and m.

    When a hypothesis fails the report carries the failed flags and
    ``cp_bound is None``.
    """
    return _Pair(V, W, n, grids).report(p)


# -- proof identities ------------------------------------------------------------

def _values_on(v, grids: SharedGrids) -> np.ndarray:
    if isinstance(v, GridFunction):
        if v.measure is not grids.mu and v.measure is not grids.nu:
            raise InvalidInputError("function is not defined on the shared grid")
        return v.values
    vals = np.asarray(v, dtype=float)
    if vals.shape != grids.nodes.shape:
        raise InvalidInputError("function does not match the shared grid")
    return vals


@dataclass
class IdentityCheck:
    lhs: float
    rhs: float
    residual: float
    flags: list[str] = field(default_factory=list)

    @property
    def relative_residual(self) -> float:
        return abs(self.residual) / max(abs(self.lhs), abs(self.rhs), 1e-300)

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.residual))


def ground_state_energy_identity(v, V: PotentialSpec, W: PotentialSpec, grids: SharedGrids) -> IdentityCheck:
    """int |v'|^2 dmu versus int |g'|^2 dnu + int delta g^2 dnu with g = v e^{-Z}."""
    vals = _values_on(v, grids)
    mu, nu = grids.mu, grids.nu
    h = grids.h
    zd = compute_Z_delta(V, W, grids)
    Z = zd.Z.values
    flags = list(zd.flags)

    lhs = float(mu.mid_density @ np.diff(vals) ** 2) / h

    if np.max(np.abs(Z)) < _EXP_SAFE:
        g = vals * np.exp(-Z)
        grad_part = float(nu.mid_density @ np.diff(g) ** 2) / h
        pot_part = float(nu.weights[~zd.skipped] @ (zd.delta.values * g * g)[~zd.skipped])
    else:
        # e^{-Z} would overflow: carry rho_nu e^{-2Z} in log space around each midpoint
        flags.append("rescaled_exponentials")
        zm = 0.5 * (Z[:-1] + Z[1:])
        dg = vals[1:] * np.exp(-(Z[1:] - zm)) - vals[:-1] * np.exp(-(Z[:-1] - zm))
        with np.errstate(under="ignore"):
            coef = np.exp(nu.mid_log_density - 2.0 * zm)
        grad_part = float(coef @ dg**2) / h
        with np.errstate(under="ignore"):
            wg2 = np.exp(np.log(nu.weights + 1e-320) - 2.0 * Z) * vals**2
        pot_part = float(wg2[~zd.skipped] @ zd.delta.values[~zd.skipped])
    rhs = grad_part + pot_part
    return IdentityCheck(lhs, rhs, lhs - rhs, flags)


@dataclass
class JensenCheck:
    B: float
    lower_bound: float
    margin: float

    def __iter__(self):
        return iter((self.B, self.lower_bound, self.margin))


def jensen_gap_check(v, V: PotentialSpec, W: PotentialSpec, p: float, grids: SharedGrids) -> JensenCheck:
    """B = (int |v|^{2/p} dmu)^p - (int |g|^{2/p} dnu)^p against -2(p-1)||Z||_{p'} int g^2 dnu.

    Uses the shared-grid quadrature for ||Z||_{L^{p'}(nu)} so that the
    inequality is exact for the discrete measures.
    """
    p = float(p)
    if not 1.0 < p < 2.0:
        raise InvalidInputError(f"p must lie in (1, 2) (got {p})")
    vals = _values_on(v, grids)
    if not np.any(vals):
        raise InvalidInputError("v vanishes identically")
    mu, nu = grids.mu, grids.nu
    Z = grids.Z(grids.nodes)
    q = 2.0 / p
    pp = p / (p - 1.0)
    nz = (vals != 0) & (mu.weights > 0) & (nu.weights > 0)
    la = np.log(np.abs(vals[nz]))
    lmu, lnu = np.log(mu.weights[nz]), np.log(nu.weights[nz])
    Zn = Z[nz]
    term_mu = math.exp(p * logsumexp(lmu + q * la))
    term_nu = math.exp(p * logsumexp(lnu + q * (la - Zn)))
    g2 = math.exp(logsumexp(lnu + 2.0 * (la - Zn)))
    pos = nu.weights > 0
    with np.errstate(divide="ignore"):
        znorm = math.exp(logsumexp(np.log(nu.weights[pos]) + pp * np.log(np.abs(Z[pos]))) / pp)
    B = term_mu - term_nu
    lower = -2.0 * (p - 1.0) * znorm * g2
    return JensenCheck(B, lower, B - lower)


# -- sweeps ------------------------------------------------------------------

@dataclass
class SweepResult:
    reports: list
    endpoint: PerturbationReport | None
    liminf_surrogate: float | None
    smallest_p_value: float | None
    errors: dict = field(default_factory=dict)


def corollary2_sweep(
    V: PotentialSpec,
    W: PotentialSpec,
    p_list: Sequence[float] = DEFAULT_P_LIST,
    n: int = DEFAULT_N,
) -> SweepResult:
    """C_p bounds along p -> 1, plus the p = 1 endpoint for a Gaussian reference.

    ``liminf_surrogate`` is the minimum over the finite entries of the list;
    ``smallest_p_value`` is the bound at the smallest p that passed.
    """
    p_list = [float(p) for p in p_list]
    if not p_list:
        raise InvalidInputError("p_list must not be empty")
    pair = _Pair(V, W, n)
    reports: list = []
    errors: dict = {}
    for p in sorted(p_list, reverse=True):
        try:
            reports.append(pair.report(p))
        except SobolevLabError as exc:
            errors[p] = str(exc)
            reports.append(None)
    endpoint = pair.report(1.0) if W.family == "gaussian" else None
    finite = [(r.p, r.cp_bound) for r in reports if r is not None and r.cp_bound is not None]
    surrogate = min((b for _, b in finite), default=None)
    smallest = min(finite)[1] if finite else None
    return SweepResult(reports, endpoint, surrogate, smallest, errors)


@dataclass
class SigmaEntry:
    sigma: float
    e_inf_grid: float
    e_inf_location: float
    e_tail: dict
    e_bounded_below: bool | None
    z_integrable: bool | None
    report: PerturbationReport
    passed: bool


@dataclass
class Corollary5Result:
    entries: list[SigmaEntry]
    best_sigma: float | None

    @property
    def any_passed(self) -> bool:
        return self.best_sigma is not None


def corollary5_tail(V: PotentialSpec, sigma: float, side: int) -> asymptotics.PowerSum | None:
    """(V'^2 - 2V'' - x^2/sigma^4)(side * r) as a power sum in r."""
    tv = V.tail_terms(side)
    if tv is None:
        return None
    vr = asymptotics.differentiate(tv)
    vrr = asymptotics.differentiate(vr)
    return asymptotics.add(asymptotics.multiply(vr, vr), asymptotics.scale(vrr, -2.0), {2.0: -1.0 / sigma**4})


def corollary5_check(
    V: PotentialSpec,
    sigma_list: Sequence[float] = DEFAULT_SIGMAS,
    p: float = 1.5,
    n: int = DEFAULT_N,
) -> Corollary5Result:
    """Gaussian references W = x^2/(2 sigma^2): local condition, Z integrability
    and the resulting bound for each sigma; best sigma minimizes the bound."""
    sigma_list = [float(s) for s in sigma_list]
    if not sigma_list or any(not s > 0 for s in sigma_list):
        raise InvalidInputError("sigma_list must be nonempty with all sigma > 0")
    p_prime = math.inf if p == 1.0 else p / (p - 1.0)
    entries = []
    for sigma in sigma_list:
        W = gaussian(sigma)
        grids = shared_grids(V, W, n)
        x = grids.nodes
        with np.errstate(invalid="ignore"):
            e = V.grad(x) ** 2 - 2.0 * V.hess(x) - x**2 / sigma**4
        bad = V.singular_mask(x, grids.h) | ~np.isfinite(e)
        i = int(np.nanargmin(np.where(bad, np.nan, e)))
        tails = {}
        bounded: bool | None = True
        for side, key in ((+1, "+inf"), (-1, "-inf")):
            s = corollary5_tail(V, sigma, side)
            if s is None:
                bounded = None
                continue
            tails[key] = asymptotics.tail_limit(s)
            if tails[key] == "-inf":
                bounded = False
        integrable = z_integrable(V, W, p_prime)
        report = _Pair(V, W, n, grids).report(p)
        passed = bool(bounded) and integrable is not False and report.passed
        entries.append(SigmaEntry(sigma, float(e[i]), float(x[i]), tails, bounded, integrable, report, passed))
    passing = [en for en in entries if en.passed]
    best = min(passing, key=lambda en: (en.report.cp_bound, en.sigma)).sigma if passing else None
    return Corollary5Result(entries, best)

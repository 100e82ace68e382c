"""Leading-order tail analysis for finite sums of real powers.

A tail expansion is a mapping ``exponent -> coefficient`` standing for
``sum(c * r**e)`` as ``r -> +inf``.  Closed-form potentials are exact finite
sums of this kind on each half-line, so products and derivatives of them can
be evaluated symbolically and the sign of the dominant term decides whether
an expression is bounded below at infinity.
"""

from __future__ import annotations

from typing import Mapping

PowerSum = dict[float, float]

_ZERO_RTOL = 1e-12


def _clean(terms: Mapping[float, float]) -> PowerSum:
    scale = max((abs(c) for c in terms.values()), default=0.0)
    return {e: c for e, c in terms.items() if abs(c) > _ZERO_RTOL * scale and c != 0.0}


def add(*sums: Mapping[float, float]) -> PowerSum:
    out: PowerSum = {}
    for s in sums:
        for e, c in s.items():
            out[e] = out.get(e, 0.0) + c
    return _clean(out)


def scale(s: Mapping[float, float], factor: float) -> PowerSum:
    return _clean({e: factor * c for e, c in s.items()})


def multiply(a: Mapping[float, float], b: Mapping[float, float]) -> PowerSum:
    out: PowerSum = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            out[e] = out.get(e, 0.0) + ca * cb
    return _clean(out)


def differentiate(s: Mapping[float, float]) -> PowerSum:
    """d/dr of the power sum."""
    return _clean({e - 1.0: e * c for e, c in s.items() if e != 0.0})


def leading(s: Mapping[float, float]) -> tuple[float, float] | None:
    """Dominant ``(exponent, coefficient)`` as r -> inf, or None for the zero sum."""
    s = _clean(s)
    if not s:
        return None
    e = max(s)
    return e, s[e]


def tail_limit(s: Mapping[float, float]) -> str:
    """One of ``"+inf"``, ``"-inf"`` or ``"finite"``."""
    lead = leading(s)
    if lead is None or lead[0] <= 0.0:
        return "finite"
    return "+inf" if lead[1] > 0 else "-inf"


def bounded_below(s: Mapping[float, float]) -> bool:
    return tail_limit(s) != "-inf"


def bounded(s: Mapping[float, float]) -> bool:
    return tail_limit(s) == "finite"

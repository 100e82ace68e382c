"""
Bounding C_p(mu) through a Gaussian reference
=============================================

Write mu = e^{-2Z} nu with a reference nu whose constant is known.  If
delta = Z'^2 - Z'' + Z'W' is bounded below and Z lies in L^{p'}(nu), the
Poincare constant of mu and the reference constant combine into an explicit
upper bound for C_p(mu).  Comparing it with the ascent estimate brackets
the true value.
"""

from sobolevlab import build_measure, corollary2_sweep, estimate_cp, gaussian, parse_potential, theorem1_bound

V, W = parse_potential("poly:2=0.5,4=0.25"), gaussian(1.0)
mu = build_measure(V, 4001)
for p in (1.5, 1.25, 1.1):
    r = theorem1_bound(V, W, p)
    lo = estimate_cp(mu, p).value
    print(f"p={p:<5} {lo:.4f} <= C_p <= {r.cp_bound:.4f}   m={r.m:.4f}  ||Z||={r.z_norm_nu:.4f}  flags={r.flags}")

# a heavy-tailed measure: delta is unbounded below, so no bound is produced
r = theorem1_bound(parse_potential("power:alpha=1.2"), W, 1.5)
print("\n|x|^1.2 against N(0,1): bound", r.cp_bound, "m", r.m, r.flags)

# the sweep towards p = 1 with the log-Sobolev endpoint of the Gaussian reference
s = corollary2_sweep(V, W)
for rep in s.reports:
    print(f"  p={rep.p:<5} bound {rep.cp_bound:.3f}")
print("  endpoint p=1:", s.endpoint.cp_bound)

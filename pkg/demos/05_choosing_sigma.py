"""
Choosing the width of the Gaussian reference
============================================

With W = x^2 / (2 sigma^2) the lower bound on delta reduces to a condition on
E(x) = V'^2 - 2V'' - x^2 / sigma^4.  Quartic potentials satisfy it for every
sigma, the two-sided exponential for none, and x^2/2 exactly when sigma >= 1
because then E = (1 - sigma^-4) x^2 - 2.
"""

from sobolevlab import corollary5_check, parse_potential

for text in ("poly:4=0.25", "power:alpha=1", "poly:2=0.5"):
    res = corollary5_check(parse_potential(text), (0.5, 0.75, 1.0, 1.5, 2.0))
    print(text)
    for e in res.entries:
        bound = e.report.cp_bound
        shown = f"{bound:.4f}" if bound is not None else "-"
        print(f"  sigma={e.sigma:<5} E bounded below: {str(e.e_bounded_below):<5} passed: {str(e.passed):<5} bound {shown}")
    print("  best sigma:", res.best_sigma)

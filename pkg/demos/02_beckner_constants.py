"""
Beckner constants by Rayleigh-quotient ascent
=============================================

C_p(mu) is the best constant in

    (int u^2 - (int |u|^{2/p})^p) / (p - 1)  <=  C_p int u'^2,      1 < p <= 2.

The ascent returns a witness u, so every reported value is a certified lower
bound.  It always sits between (2/p) C_2 and C_2 / (p - 1).
"""

from sobolevlab import beckner_quotient, build_measure, estimate_cp, gaussian, parse_potential, spectral_gap

nu = build_measure(gaussian(1.0), 4001)
print("Gaussian: C_p = 2/p")
for p in (1.1, 1.25, 1.5, 2.0):
    est = estimate_cp(nu, p)
    print(f"  p={p:<5} estimate {est.value:.5f}   2/p {2 / p:.5f}   best seed {est.details['best_seed']}")

mu = build_measure(parse_potential("poly:2=0.5,4=0.25"), 4001)
c2 = spectral_gap(mu).value
print(f"\nquartic, C2 = {c2:.5f}")
for p in (1.1, 1.5, 1.9):
    est = estimate_cp(mu, p)
    print(f"  p={p:<4} {2 / p * c2:.4f} <= {est.value:.4f} <= {c2 / (p - 1):.4f}")

# the witness is a real function on the grid; its quotient reproduces the value
w = est.witness
print("\nwitness quotient:", beckner_quotient(w, 1.9), " sup|u| =", abs(w.values).max())

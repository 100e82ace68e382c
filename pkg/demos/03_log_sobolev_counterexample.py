"""
Log-Sobolev constants and a family where they blow up
=====================================================

As p -> 1 the Beckner deficit, normalized by 1/(p - 1), tends to the
entropy, so the Beckner constants approach the log-Sobolev constant C_1.
For e^{-|x|^alpha} with 1 <= alpha < 2 the log-Sobolev inequality fails,
and the Beckner estimates grow without bound along the sweep.
"""

import numpy as np

from sobolevlab import beckner_deficit, build_measure, estimate_c1_entropy, gaussian, log_sobolev_entropy, power

nu = build_measure(gaussian(1.0), 4001)
print("Gaussian C1 lower bound:", estimate_c1_entropy(nu, sweep_p=None).value, "(exact 2)")

u = nu.function(lambda x: np.exp(0.3 * x))
for p in (1.1, 1.01, 1.001, 1.0001):
    print(f"  deficit at p={p:<7} {beckner_deficit(u, p):.8f}   entropy {log_sobolev_entropy(u):.8f}")

sweep = (1.5, 1.25, 1.1, 1.05)
for alpha in (1.2, 1.5, 2.0):
    est = estimate_c1_entropy(build_measure(power(alpha), 4001), sweep_p=sweep)
    s = est.details["sweep"]
    vals = ", ".join(f"{v:.3f}" for v in s["cp"])
    print(f"|x|^{alpha}: C_p along p={sweep}: {vals}  ->  {s['flag']}")

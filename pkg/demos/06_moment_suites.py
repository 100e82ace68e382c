"""
Randomized checks of the moment inequalities
============================================

The lift from mean-zero functions to all functions rests on elementary
moment inequalities for finite probability vectors.  Each suite draws
reproducible random measures and functions and records the worst slack.
"""

from sobolevlab.moments import remark2_gap
from sobolevlab.suites import SUITES, run_suite

for name in SUITES:
    r = run_suite(name, seed=42)
    print(f"{name:<12} trials={r.trials:<5} worst={r.worst: .3e}  tol={r.tolerance:g}  passed={r.passed}")

# two atoms at +-1 with q = 4: the slack is exactly 2
print("two-atom gap:", remark2_gap([0.5, 0.5], [1.0, -1.0], 4.0))

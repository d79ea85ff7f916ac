"""
Closeness to a known distribution
=================================

The known distribution g is bucketed; each heavy bucket gets a conditional
uniformity test and the bucket masses are compared classically.
"""

import numpy as np

from qproptest import Distribution, gen_matching_pair, gen_two_to_one, test_known_closeness
from qproptest.testers import closeness_query_cap

rng = np.random.default_rng(11)
m = n = 4096
eps = 0.19

# g with n*g(j) integral, and an f that realises it exactly
f, g = gen_matching_pair(n, m, rng)
v = test_known_closeness(f, g, eps, rng)
print("matching pair:", v.decision)
for step in v.transcript:
    if step.sub_verdicts:
        print(f"  {step.label}: {step.sub_verdicts.count('ACCEPT')}/{len(step.sub_verdicts)} rounds accepted")
print(f"  queries {v.classical_queries + v.quantum_queries:.3e}, cap {closeness_query_cap(m, eps):.3e}")

v = test_known_closeness(gen_two_to_one(n, rng), Distribution.uniform(m), eps, rng)
print("2-to-1 against uniform:", v.decision, "-", v.transcript[-1].estimates.get("reason"))

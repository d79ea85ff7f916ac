"""
Testing a function for uniformity
=================================

A random permutation induces the uniform distribution; a 2-to-1 function
is as far from it as possible in l1.  The tester reads ~m^(1/3) points
classically, then makes one precise quantum mass estimate.
"""

import numpy as np

from qproptest import gen_permutation, gen_two_to_one, test_uniformity, test_uniformity_amplified
from qproptest.testers import uniformity_query_ceiling

rng = np.random.default_rng(3)
m = 4096

for name, make in [("permutation", gen_permutation), ("2-to-1", gen_two_to_one)]:
    decisions = [test_uniformity(make(m, rng), 0.5, rng).decision for _ in range(50)]
    print(f"{name:12s} accepted {decisions.count('ACCEPT')}/50")

v = test_uniformity(gen_permutation(m, rng), 0.5, rng)
for step in v.transcript:
    print(f"  {step.label:10s} classical={step.classical:3d} quantum={step.quantum:8d} {step.estimates}")
print("per-run ceiling (classical, quantum):", uniformity_query_ceiling(m, 0.5))

# the majority-vote version trades queries for confidence
amp = test_uniformity_amplified(gen_two_to_one(m, rng), 0.5, rng)
print(f"amplified on a 2-to-1 function: {amp.decision} after {amp.quantum_queries} quantum queries")

"""
Finding and checking a hidden period
====================================

Each Fourier sample y sits close to c/p for a random c.  Continued
fractions recover c/p, the LCM of the denominators gives p, and a handful
of classical queries confirm it.
"""

import numpy as np

from qproptest import cfe_recover, find_period, gen_periodic_DP, gen_random_DN, shor_sample, test_periodicity

rng = np.random.default_rng(5)
n, m = 4096, 2**20

f, p = gen_periodic_DP(n, m, 32, rng)
print(f"hidden period {p}")
for _ in range(5):
    y = shor_sample(f, rng)
    print(f"  y = {y:4d}  ->  {cfe_recover(y, n, 32)}")

# one stray fraction (a sample captured by a neighbouring c'/p') can push the
# LCM past the bound, so recombination fails now and then
for _ in range(6):
    cand = find_period(f, rng=rng)
    print("recombined:", cand.p if cand else "none, LCM exceeded 32")

acc = sum(test_periodicity(gen_periodic_DP(n, m, 32, rng)[0], rng=rng).accepted for _ in range(100))
rej = sum(not test_periodicity(gen_random_DN(n, m, 16, 32, 0.1, rng)[0], rng=rng).accepted for _ in range(100))
print(f"periodic instances accepted {acc}/100, far instances rejected {rej}/100")
print("queries per run do not depend on n:", test_periodicity(f, rng=rng).quantum_queries, "quantum")

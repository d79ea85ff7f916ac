"""
Counting marked items with amplitude estimation
===============================================

The counting estimator is simulated through its exact outcome
distribution.  Here we compare it with a full statevector run and then look
at how often the error bound is broken.
"""

import numpy as np

from qproptest import OracleFunction
from qproptest import quantum

# 64 domain points, the set S = {0..15} is hit by a quarter of them
f = OracleFunction(np.arange(64), 64)
S = range(16)
M = 32

dense = quantum.phase_estimation_distribution(f, S, M)
closed = quantum.outcome_distribution(64, 16, M)
print(f"total variation, statevector vs closed form: {0.5 * np.abs(dense - closed).sum():.2e}")
print(f"building the Grover iterate cost {f.quantum_queries} oracle calls")

# sample the estimator many times at a larger size
rng = np.random.default_rng(1)
n, t, q, ell = 1024, 256, 128, 4
y = quantum.sample_phase_outcomes(n, t, q, 20_000, rng)
est = quantum.estimates_from_outcomes(n, q, y)
bound = quantum.count_error_bound(n, t, q, ell)
print(f"median estimate {np.median(est):.1f} for t = {t}")
print(f"outside the bound {bound:.1f}: {np.mean(np.abs(est - t) > bound):.4f} (allowed {1 / (2 * (ell - 1)):.4f})")

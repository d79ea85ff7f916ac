"""
The classical side: sampling, collisions, distinguishing
========================================================

Samples of an explicit distribution can be turned into an oracle function.
The collision baseline needs about sqrt(m) queries where the quantum
uniformity test reads about m^(1/3) classically.
"""

import math

import numpy as np

from qproptest import Distribution, classical_uniformity_collision, empirical_reconstruction, gen_two_to_one, l1_distance
from qproptest.experiments import distinguish_experiment, distinguish_success_rate

rng = np.random.default_rng(2)

P = Distribution(rng.dirichlet(np.ones(64)))
for n in (64, 1024, 16384):
    errs = [l1_distance(P, empirical_reconstruction(P, n, rng)[1]) for _ in range(100)]
    print(f"n = {n:5d}: mean l1 error {np.mean(errs):.4f}, sqrt(m/n) = {math.sqrt(64 / n):.4f}")

m = 4096
for budget in (16, 64, 256):
    hits = sum(not classical_uniformity_collision(gen_two_to_one(m, rng), budget, rng).accepted for _ in range(200))
    print(f"collision baseline, {budget:3d} queries: rejects 2-to-1 in {hits / 200:.2f} of runs")

for q in (2, 8, 32):
    rate = distinguish_success_rate(distinguish_experiment(q, 4096, 2**20, 32, 200, rng))
    print(f"periodic vs far, {q:2d} classical queries: success {rate:.2f}")

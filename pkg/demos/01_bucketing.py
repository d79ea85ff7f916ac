"""
Splitting a distribution into near-uniform buckets
==================================================

A skewed distribution over 256 outcomes is cut into geometric probability
bands.  Each band is almost flat once renormalised.
"""

import math

import numpy as np

from qproptest import Distribution, bucket, l1_distance, restrict

rng = np.random.default_rng(7)

# a power-law distribution, shuffled so bands are scattered across [m]
w = 1.0 / np.arange(1, 257) ** 1.3
rng.shuffle(w)
P = Distribution(w / w.sum())

part = bucket(P, 0.25)
print(f"k = {part.k} bands, {len(part.nonempty())} of them non-empty")

# the lightest band never holds more than 1/log2 m of the mass
print(f"mass below 1/(m log m): {P.mass(part.buckets[0]):.4f}  (limit {1 / math.log2(256):.4f})")

for i in part.nonempty():
    M = part.buckets[i]
    if i == 0 or M.size < 2:
        continue
    gap = l1_distance(restrict(P, M), Distribution.uniform(M.size))
    print(f"band {i:3d}: {M.size:3d} outcomes, mass {P.mass(M):.4f}, l1 to flat {gap:.4f}")

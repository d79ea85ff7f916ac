"""Bucketing: split an explicit distribution into near-uniform pieces.

Thresholds use base-2 logarithms.  Bucket ``i >= 1`` holds the elements with
``(1+eps)**(i-1) / (m log m) <= P(j) < (1+eps)**i / (m log m)`` and bucket 0
holds everything below ``1 / (m log m)``.
"""

from __future__ import annotations

import math

import numpy as np

from .distributions import BucketPartition, Distribution


def num_buckets(m: int, epsilon: float) -> int:
    """k = ceil(2 log2 m / log2(1 + eps))."""
    return math.ceil(2 * math.log2(m) / math.log2(1 + epsilon))


def thresholds(m: int, epsilon: float) -> np.ndarray:
    """Lower edges of buckets 1..k followed by the (unreachable) top edge."""
    k = num_buckets(m, epsilon)
    base = 1.0 / (m * math.log2(m))
    return base * (1.0 + epsilon) ** np.arange(k + 1)


def bucket(P: Distribution, epsilon: float) -> BucketPartition:
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    m = P.m
    if m < 2:
        raise ValueError("bucketing needs m >= 2")
    k = num_buckets(m, epsilon)
    edges = thresholds(m, epsilon)
    # number of edges <= P(j): ties go to the higher bucket
    labels = np.searchsorted(edges, P.weights, side="right")
    if labels.max() > k:
        raise AssertionError("weight above the top threshold")
    buckets = tuple(np.flatnonzero(labels == i) for i in range(k + 1))
    return BucketPartition(epsilon=float(epsilon), m=m, buckets=buckets)

"""Classical baselines and the sampling-to-oracle bridge."""

from __future__ import annotations

import math
import warnings

import numpy as np

from .distributions import (
    ACCEPT,
    REJECT,
    BucketPartition,
    Distribution,
    OracleFunction,
    Recorder,
    TestVerdict,
    as_rng,
    coarse,
    distribution_of,
)


class UndersampledWarning(UserWarning):
    """Fewer samples than outcomes: the induced distribution is necessarily coarse."""


def sample_distribution(P: Distribution, size: int, rng: np.random.Generator) -> np.ndarray:
    """Inverse-CDF sampling; zero-weight outcomes are never drawn."""
    cdf = np.cumsum(P.weights)
    u = rng.random(size)
    idx = np.searchsorted(cdf, u * cdf[-1], side="right")
    return np.minimum(idx, P.m - 1)


def classical_uniformity_collision(f: OracleFunction, budget: int, rng) -> TestVerdict:
    """Query ``budget`` distinct uniform domain points; REJECT iff two images coincide."""
    if budget < 2:
        raise ValueError("budget must be at least 2")
    rng, seed = as_rng(rng)
    rec = Recorder(f, seed)
    xs = rng.choice(f.n, size=min(budget, f.n), replace=False)
    vals = f.query_many(xs)
    distinct = np.unique(vals).size
    rec.log("sample", {"budget": int(xs.size), "distinct": int(distinct)})
    return rec.verdict(REJECT if distinct < xs.size else ACCEPT)


def empirical_reconstruction(P: Distribution, n_samples: int, rng) -> tuple[OracleFunction, Distribution]:
    """Draw n i.i.d. samples of P and let f(j) be the j-th sample.

    E||P~ - P||_1 <= sqrt(m / n).
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    rng, _ = as_rng(rng)
    if n_samples < P.m:
        warnings.warn(
            f"n_samples={n_samples} < m={P.m}: probabilities are multiples of 1/{n_samples}",
            UndersampledWarning,
            stacklevel=2,
        )
    f = OracleFunction(sample_distribution(P, n_samples, rng), P.m)
    return f, distribution_of(f)


def coarse_sample_size(k: int, epsilon: float, factor: float = 48.0) -> int:
    return math.ceil(factor * k / epsilon**2)


def classical_coarse_l1_test(
    f: OracleFunction,
    g: Distribution,
    part: BucketPartition,
    epsilon: float,
    rng,
    sample_factor: float = 48.0,
    return_distance: bool = False,
):
    """Plug-in test of the coarse (bucket-level) distributions.

    Draws ceil(sample_factor * k / eps²) uniform domain points and accepts iff
    the empirical coarse distribution is within eps/8 of g's in l1.
    """
    rng, _ = as_rng(rng)
    if part.k == 0:
        return (True, 0.0) if return_distance else True
    N = coarse_sample_size(part.k, epsilon, sample_factor)
    xs = rng.integers(0, f.n, size=N)
    labels = part.labels()[f.query_many(xs)]
    emp = np.bincount(labels, minlength=part.k + 1) / N
    dist = float(np.abs(emp - coarse(g, part).weights).sum())
    ok = dist <= epsilon / 8
    return (ok, dist) if return_distance else ok

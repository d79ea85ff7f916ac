"""Instance generators: positive and negative inputs for every tester.

All generators are deterministic functions of their parameters and the
random generator (or integer seed) they are given.
"""

from __future__ import annotations

import math

import numpy as np

from .distributions import Distribution, OracleFunction, as_rng


class GenerationError(RuntimeError):
    pass


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi (sieve of Eratosthenes)."""
    if hi < 2:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(hi) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(sieve) if p >= lo]


def _from_counts(counts: np.ndarray, m: int, rng: np.random.Generator) -> OracleFunction:
    table = np.repeat(np.arange(m), counts)
    rng.shuffle(table)
    return OracleFunction(table, m)


def gen_permutation(n: int, rng) -> OracleFunction:
    """Uniform random bijection [n] -> [n]; P_f is exactly uniform."""
    rng, _ = as_rng(rng)
    return OracleFunction(rng.permutation(n), n)


def gen_two_to_one(n: int, rng) -> OracleFunction:
    """Uniform random 2-to-1 function [n] -> [n]; ||P_f - U||_1 = 1."""
    if n % 2:
        raise ValueError("a 2-to-1 function needs n even")
    rng, _ = as_rng(rng)
    image = rng.choice(n, size=n // 2, replace=False)
    table = np.repeat(image, 2)
    rng.shuffle(table)
    return OracleFunction(table, n)


def gen_linf_perturbed_uniform(n: int, m: int, epsilon: float, rng, profile: str = "uniform") -> OracleFunction:
    """Preimage counts n/m + d_j with |d_j| <= floor(eps n / 4m) and sum d_j = 0.

    So ||P_f - U||_inf <= eps/(4m).  ``profile`` picks the deviations before
    rebalancing: "uniform" draws each d_j uniformly from [-D, D], "extreme"
    draws d_j = ±D.  With D = 0 the result is exactly uniform.
    """
    if n % m:
        raise ValueError("m must divide n")
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    rng, _ = as_rng(rng)
    base = n // m
    D = math.floor(epsilon * n / (4 * m))
    if profile == "uniform":
        d = rng.integers(-D, D + 1, size=m)
    elif profile == "extreme":
        d = D * rng.choice([-1, 1], size=m)
    else:
        raise ValueError(f"unknown profile {profile!r}")
    while (s := int(d.sum())) != 0:
        step = -1 if s > 0 else 1
        movable = np.flatnonzero(d > -D) if step < 0 else np.flatnonzero(d < D)
        pick = rng.choice(movable, size=min(abs(s), movable.size), replace=False)
        d[pick] += step
    f = _from_counts(base + d, m, rng)
    assert np.abs(f.preimage_counts() - base).max() * 4 * m <= epsilon * n + 1e-9
    return f


def gen_matching_pair(n: int, m: int, rng) -> tuple[OracleFunction, Distribution]:
    """(f, g) with P_f = g exactly; g has multinomial counts, so n g(j) is integral."""
    rng, _ = as_rng(rng)
    counts = rng.multinomial(n, np.full(m, 1.0 / m))
    return _from_counts(counts, m, rng), Distribution(counts / n)


def gen_periodic_DP(n: int, m: int, r: int, rng) -> tuple[OracleFunction, int]:
    """Prime period p uniform in [r/2, r], injective first period, repeated over [n]."""
    if m < n:
        raise ValueError("periodic instances assume m >= n")
    if not r < n / 2:
        raise ValueError("need r < n/2")
    primes = primes_between(math.ceil(r / 2), r)
    if not primes:
        raise GenerationError(f"no prime in [{r / 2}, {r}]")
    rng, _ = as_rng(rng)
    p = int(rng.choice(primes))
    period = rng.choice(m, size=p, replace=False)
    f = OracleFunction(period[np.arange(n) % p], m)
    return f, p


def periodic_distance_lower_bound(f: OracleFunction, p: int) -> int:
    """Lower bound on the Hamming distance from f to any 1-1-p-periodic function.

    Dropping injectivity, the closest p-periodic function takes each residue
    class's most common value, so the distance is at least n minus the sum of
    the class maxima.
    """
    table = f.table
    res = np.arange(f.n) % p
    keys = res * f.m + table
    uniq, counts = np.unique(keys, return_counts=True)
    best = np.zeros(p, dtype=np.int64)
    np.maximum.at(best, uniq // f.m, counts)
    return int(f.n - best.sum())


def gen_random_DN(n: int, m: int, q_lo: int, r_hi: int, epsilon: float, rng, max_redraws: int = 100) -> tuple[OracleFunction, float]:
    """Uniformly random f, redrawn until certified eps-far from every period in [q_lo, r_hi].

    Returns (f, certificate) where certificate is the certified relative distance.
    """
    if m < n:
        raise ValueError("periodic instances assume m >= n")
    rng, _ = as_rng(rng)
    for _ in range(max_redraws):
        f = OracleFunction(rng.integers(0, m, size=n), m)
        cert = certified_farness(f, q_lo, r_hi, threshold=epsilon)
        if cert >= epsilon:
            return f, cert
    raise GenerationError(f"no {epsilon}-far function after {max_redraws} draws")


def certified_farness(f: OracleFunction, q_lo: int, r_hi: int, threshold: float | None = None) -> float:
    """Lower bound on the relative distance from f to P_{q_lo..r_hi}.

    Summed over residue classes, the class maxima exceed 1 by at most
    n - #distinct values, which gives the cheap bound (#distinct - r_hi)/n for
    every period at once.  It is returned
    as soon as it clears ``threshold``; otherwise the per-period bound is used.
    """
    distinct = int(np.unique(f.table).size)
    quick = (distinct - r_hi) / f.n
    if threshold is not None and quick >= threshold:
        return quick
    return min(periodic_distance_lower_bound(f, p) for p in range(q_lo, r_hi + 1)) / f.n

"""Quantum distribution testers built on simulated amplitude estimation.

* :func:`qestimate` estimates P_f(S) for a set S of range values.
* :func:`test_uniformity` is the tolerant uniformity tester: a birthday
  check on ~m^{1/3} samples followed by one precise mass estimate.
* :func:`test_uniformity_amplified` is its majority-vote amplification.
* :func:`test_known_closeness` tests P_f against an explicit distribution
  through bucketing.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import quantum
from .bucketing import bucket
from .classical import classical_coarse_l1_test
from .distributions import (
    ACCEPT,
    REJECT,
    Distribution,
    OracleFunction,
    Recorder,
    TestVerdict,
    as_rng,
    ceil_cbrt,
)


@dataclass(frozen=True)
class TesterConfig:
    """Every tunable constant of the testers, echoed into transcripts."""

    __test__ = False

    c: float = 8 * math.pi  # QEstimate iterations q = ceil(c m^{1/3} / delta)
    ell: float = 4.0  # counting confidence; success >= 1 - 1/(2(ell-1)) = 5/6
    amp_a: float = 9.0  # amplification repetitions ceil(a log2 log2 m) + b, made odd
    amp_b: int = 3
    rejection_budget: float = 10.0  # conditional sampling draws: budget * t * k / eps
    coarse_samples: float = 48.0  # coarse test samples: ceil(coarse_samples * k / eps²)
    # Cap C in C m^{1/3} log2²m log2log2 m / eps^5 for the closeness tester.  The
    # worst case of this implementation (every bucket eligible) stays below
    # ~5.1e6 for all m >= 8, eps <= 1.
    closeness_cap: float = 1.0e7

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = TesterConfig()


def qestimate_iterations(m_eff: int, delta: float, config: TesterConfig = DEFAULT_CONFIG) -> int:
    return math.ceil(config.c * m_eff ** (1.0 / 3.0) / delta)


def qestimate_bound(p: float, m: int, delta: float) -> float:
    """delta sqrt(p) / m^{1/3} + delta² / m^{2/3}."""
    return delta * math.sqrt(p) / m ** (1 / 3) + delta**2 / m ** (2 / 3)


def qestimate(
    f: OracleFunction,
    S,
    delta: float,
    rng,
    m_eff: int | None = None,
    config: TesterConfig = DEFAULT_CONFIG,
) -> float:
    """Estimate p = P_f(S) = |f^{-1}(S)|/n.

    With probability >= 5/6, |p' - p| <= delta sqrt(p)/m^{1/3} + delta²/m^{2/3},
    where m is ``m_eff`` (default f.m).  Uses q = ceil(c m^{1/3}/delta) Grover
    iterations, each a membership-oracle call worth 2 queries to f.
    """
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    f.require_power_of_two()
    rng, _ = as_rng(rng)
    m_eff = f.m if m_eff is None else m_eff
    q = qestimate_iterations(m_eff, delta, config)
    members = np.zeros(f.m, dtype=bool)
    S = np.fromiter(S, dtype=np.int64)
    members[S] = True
    t = int(members[f.table].sum())  # the simulator's view of the marked set
    est = quantum.amplitude_estimate(f.n, t, q, config.ell, rng, oracle=f, queries_per_call=2)
    return est.t_prime / f.n


# ---------------------------------------------------------------------------
# Uniformity


def _check_eps(epsilon: float) -> None:
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")


def uniformity_sample_size(m: int) -> int:
    return ceil_cbrt(m)


def uniformity_query_ceiling(m: int, epsilon: float, config: TesterConfig = DEFAULT_CONFIG) -> tuple[int, int]:
    """(classical, quantum) ceiling for one run of :func:`test_uniformity`."""
    delta = epsilon**2 / 320
    return uniformity_sample_size(m), 2 * qestimate_iterations(m, delta, config)


def test_uniformity(f: OracleFunction, epsilon: float, rng, config: TesterConfig = DEFAULT_CONFIG) -> TestVerdict:
    """Tolerant uniformity test.

    REJECT (w.p. >= 2/3) if ||P_f - U||_1 >= eps; ACCEPT (w.p. >= 2/3) if
    ||P_f - U||_inf <= eps/(4m).
    """
    _check_eps(epsilon)
    if f.m < 8:
        raise ValueError("uniformity testing needs m >= 8")
    f.require_power_of_two()
    rng, seed = as_rng(rng)
    rec = Recorder(f, seed)
    m = f.m
    t = uniformity_sample_size(m)
    T = rng.choice(f.n, size=t, replace=False)
    images = f.query_many(T)
    S = np.unique(images)
    rec.log("sample", {"t": t, "distinct": int(S.size)})
    if S.size < t:
        return rec.verdict(REJECT, reason="collision")
    delta = epsilon**2 / 320
    p_est = qestimate(f, S, delta, rng, config=config)
    target = t / m
    ok = abs(p_est - target) <= 32 * delta * target
    rec.log("qestimate", {"p_est": p_est, "target": target, "delta": delta})
    return rec.verdict(ACCEPT if ok else REJECT)


def amplification_rounds(m: int, config: TesterConfig = DEFAULT_CONFIG) -> int:
    """ceil(a log2 log2 m) + b, bumped to the next odd number."""
    r = math.ceil(config.amp_a * math.log2(max(math.log2(m), 1.0))) + config.amp_b
    return r if r % 2 else r + 1


def _majority(rounds: int, run_once, rec: Recorder, label: str) -> str:
    subs = []
    for _ in range(rounds):
        v = run_once()
        subs.append(v.decision)
    accepts = subs.count(ACCEPT)
    decision = ACCEPT if 2 * accepts > rounds else REJECT
    rec.log(label, {"rounds": rounds, "accepts": accepts}, subs)
    return decision


def test_uniformity_amplified(
    f: OracleFunction, epsilon: float, rng, config: TesterConfig = DEFAULT_CONFIG
) -> TestVerdict:
    """Majority vote over an odd number of independent :func:`test_uniformity` runs."""
    _check_eps(epsilon)
    if f.m < 8:
        raise ValueError("uniformity testing needs m >= 8")
    rng, seed = as_rng(rng)
    rec = Recorder(f, seed)
    R = amplification_rounds(f.m, config)
    decision = _majority(R, lambda: test_uniformity(f, epsilon, rng, config), rec, "majority")
    return rec.verdict(decision)


# ---------------------------------------------------------------------------
# Closeness to a known distribution


def _conditional_uniformity(
    f: OracleFunction,
    M: np.ndarray,
    epsilon: float,
    k: int,
    rng: np.random.Generator,
    config: TesterConfig,
) -> tuple[str, dict]:
    """One run of the uniformity test on the conditional distribution (P_f)|M.

    Samples of the conditional come from rejection: distinct uniform domain
    points are queried until t of them land in M.  The mass estimate compares
    P_f(S) with (t/|M|) P_f(M), both estimated at precision delta sqrt(eps/k).
    """
    size = int(M.size)
    t = uniformity_sample_size(size) if size >= 8 else 1
    in_M = np.zeros(f.m, dtype=bool)
    in_M[M] = True
    budget = min(f.n, math.ceil(config.rejection_budget * t * k / epsilon))
    order = rng.permutation(f.n)[:budget]
    # A sequential sampler stops at the t-th hit.  Locate that point on the
    # table, then query exactly that prefix; only queried values are used.
    hit_pos = np.flatnonzero(in_M[f.table[order]])
    stop = int(hit_pos[t - 1]) + 1 if hit_pos.size >= t else budget
    vals = f.query_many(order[:stop])
    hits = vals[in_M[vals]]
    info = {"size": size, "t": t, "draws": stop, "hits": int(hits.size)}
    if hits.size < t:
        info["starved"] = True
        return ACCEPT, info
    S = np.unique(hits)
    if S.size < t:
        info["collision"] = True
        return REJECT, info
    delta = epsilon**2 / 320
    delta_sub = delta * math.sqrt(epsilon / k)
    p1 = qestimate(f, S, delta_sub, rng, m_eff=size, config=config)
    p2 = qestimate(f, M, delta_sub, rng, m_eff=size, config=config)
    ratio = t / size
    ok = abs(p1 - ratio * p2) <= 32 * delta * ratio * p2
    info.update(p1=p1, p2=p2)
    return (ACCEPT if ok else REJECT), info


def closeness_query_cap(m: int, epsilon: float, config: TesterConfig = DEFAULT_CONFIG) -> float:
    """C m^{1/3} log2²m log2log2 m / eps^5."""
    L = math.log2(m)
    return config.closeness_cap * m ** (1 / 3) * L**2 * math.log2(max(L, 2.0)) / epsilon**5


def test_known_closeness(
    f: OracleFunction,
    g: Distribution,
    epsilon: float,
    rng,
    config: TesterConfig = DEFAULT_CONFIG,
) -> TestVerdict:
    """Distinguish ||P_f - g||_1 = 0 from ||P_f - g||_1 > 5 eps (w.p. >= 2/3)."""
    _check_eps(epsilon)
    if g.m != f.m:
        raise ValueError(f"g is over {g.m} elements, f maps into {f.m}")
    f.require_power_of_two()
    rng, seed = as_rng(rng)
    rec = Recorder(f, seed)
    if f.m == 1:
        return rec.verdict(ACCEPT, reason="m=1")
    part = bucket(g, epsilon / 4)
    k = part.k
    rec.log("bucket", {"k": k, "nonempty": len(part.nonempty()), "config": config.as_dict()})
    R = amplification_rounds(max(f.m, 8), config)
    for i in range(1, k + 1):
        M = part.buckets[i]
        if M.size == 0:
            continue
        mass = float(g.weights[M].sum())
        if mass < epsilon / k:
            rec.log(f"bucket {i} skipped", {"g_mass": mass, "size": int(M.size)})
            continue
        subs, infos = [], []
        for _ in range(R):
            d, info = _conditional_uniformity(f, M, epsilon, k, rng, config)
            subs.append(d)
            infos.append(info)
        accepts = subs.count(ACCEPT)
        rec.log(
            f"bucket {i}",
            {"g_mass": mass, "size": int(M.size), "rounds": R, "accepts": accepts},
            subs,
        )
        if 2 * accepts <= R:
            return rec.verdict(REJECT, reason=f"bucket {i} not uniform")
    coarse_ok, coarse_dist = classical_coarse_l1_test(f, g, part, epsilon, rng, config.coarse_samples, return_distance=True)
    rec.log("coarse", {"empirical_l1": coarse_dist, "threshold": epsilon / 8})
    if not coarse_ok:
        return rec.verdict(REJECT, reason="coarse distributions differ")
    return rec.verdict(ACCEPT)

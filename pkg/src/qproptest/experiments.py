"""Seeded Monte Carlo experiments with CSV reports.

Per-trial seeds come from ``numpy.random.SeedSequence([seed, instance_index,
trial])``: the first 64-bit word of its generated state is the trial seed,
and it is written into every row so any single trial can be replayed.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import generators as gen
from .classical import classical_uniformity_collision, empirical_reconstruction
from .distributions import ACCEPT, Distribution, as_rng, is_power_of_two, l1_distance
from .periodicity import period_bound, periodicity_query_ceiling, test_periodicity
from .testers import (
    TesterConfig,
    closeness_query_cap,
    test_known_closeness,
    test_uniformity,
    test_uniformity_amplified,
    uniformity_query_ceiling,
    amplification_rounds,
)

ALGORITHMS = ("uniformity", "uniformity_amplified", "collision", "closeness", "periodicity", "reconstruct")
QUANTUM_ALGORITHMS = {"uniformity", "uniformity_amplified", "closeness", "periodicity"}

HEADER = [
    "experiment",
    "row_type",
    "instance",
    "expected",
    "trial",
    "seed",
    "decision",
    "classical_queries",
    "quantum_queries",
    "classical_ceiling",
    "quantum_ceiling",
    "total_ceiling",
    "value",
    "accept_rate",
    "mean_classical",
    "max_classical",
    "mean_quantum",
    "max_quantum",
]


class InvariantViolation(RuntimeError):
    """A run broke a checked invariant (query ceiling, instance membership)."""


@dataclass
class ExperimentConfig:
    experiment: str = "uniformity"
    n: int = 4096
    m: int = 4096
    epsilon: float = 0.5
    trials: int = 20
    seed: int = 0
    algorithm: str = ""  # defaults to the experiment name
    c: float = 8 * math.pi
    ell: float = 4.0
    a: float = 9.0
    b: int = 3
    cap: float = 1.0e7
    k_runs: int = 12
    verify_trials: int = 60
    budget: int = 0  # classical collision budget; 0 means ceil(4 sqrt(m))
    perturb_n: int = 0  # domain size for l_inf-perturbed instances; 0 means 16 m
    workers: int = 1
    timing: bool = False
    out: str = ""

    def __post_init__(self):
        if not self.algorithm:
            self.algorithm = self.experiment
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.algorithm in QUANTUM_ALGORITHMS and not is_power_of_two(self.n):
            raise ValueError("quantum algorithms need n a power of 2")

    def tester_config(self) -> TesterConfig:
        return TesterConfig(c=self.c, ell=self.ell, amp_a=self.a, amp_b=self.b, closeness_cap=self.cap)


def load_config(path: str | Path, **overrides) -> ExperimentConfig:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    types = {f.name: f.type for f in fields(ExperimentConfig)}
    values: dict = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, val = line.partition("=")
        key, val = key.strip().replace("-", "_"), val.strip()
        if key not in types:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = _parse(types[key], val)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def _parse(typ: str, val: str):
    if typ == "int":
        return int(val)
    if typ == "float":
        return float(val)
    if typ == "bool":
        return val.lower() in {"1", "true", "yes", "on"}
    return val


def trial_seed(seed: int, instance_index: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, instance_index, trial]).generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------------------
# Instances per algorithm: (label, expected decision, builder)


def _instances(cfg: ExperimentConfig) -> list[tuple[str, str]]:
    alg = cfg.algorithm
    if alg in {"uniformity", "uniformity_amplified"}:
        return [("permutation", "ACCEPT"), ("linf_perturbed", "ACCEPT"), ("two_to_one", "REJECT")]
    if alg == "collision":
        return [("permutation", "ACCEPT"), ("two_to_one", "REJECT")]
    if alg == "closeness":
        return [("match", "ACCEPT"), ("two_to_one_vs_uniform", "REJECT")]
    if alg == "periodicity":
        return [("D_P", "ACCEPT"), ("D_N", "REJECT")]
    return [("dirichlet", "")]


def _run_trial(cfg: ExperimentConfig, label: str, expected: str, index: int, trial: int) -> dict:
    seed = trial_seed(cfg.seed, index, trial)
    rng = np.random.default_rng(seed)
    tcfg = cfg.tester_config()
    row = {"instance": label, "expected": expected, "trial": trial, "seed": seed}
    m, eps = cfg.m, cfg.epsilon
    start = time.perf_counter()
    alg = cfg.algorithm

    if alg in {"uniformity", "uniformity_amplified", "collision"}:
        if label == "permutation":
            f = gen.gen_permutation(m, rng)
        elif label == "two_to_one":
            f = gen.gen_two_to_one(m, rng)
        else:
            f = gen.gen_linf_perturbed_uniform(cfg.perturb_n or 16 * m, m, eps, rng)
        if alg == "collision":
            budget = cfg.budget or math.ceil(4 * math.sqrt(m))
            verdict = classical_uniformity_collision(f, budget, rng)
            ceilings = (budget, 0, None)
        else:
            runner = test_uniformity if alg == "uniformity" else test_uniformity_amplified
            verdict = runner(f, eps, rng, tcfg)
            c_ceil, q_ceil = uniformity_query_ceiling(m, eps, tcfg)
            if alg == "uniformity_amplified":
                R = amplification_rounds(m, tcfg)
                c_ceil, q_ceil = R * c_ceil, R * q_ceil
            ceilings = (c_ceil, q_ceil, None)
        value = ""
    elif alg == "closeness":
        if label == "match":
            f, g = gen.gen_matching_pair(cfg.n, m, rng)
            if not np.array_equal(f.preimage_counts(), np.rint(g.weights * cfg.n).astype(int)):
                raise InvariantViolation("matching instance is not an exact match")
        else:
            f, g = gen.gen_two_to_one(m, rng), Distribution.uniform(m)
        verdict = test_known_closeness(f, g, eps, rng, tcfg)
        ceilings = (None, None, closeness_query_cap(m, eps, tcfg))
        value = ""
    elif alg == "periodicity":
        n = cfg.n
        lo, hi = math.isqrt(n) // 4, period_bound(n)
        if label == "D_P":
            f, p = gen.gen_periodic_DP(n, m, hi, rng)
            value = p
        else:
            f, cert = gen.gen_random_DN(n, m, max(lo, 1), hi, eps, rng)
            value = f"{cert:.6f}"
        verdict = test_periodicity(f, eps, rng, cfg.k_runs, cfg.verify_trials)
        c_ceil, q_ceil = periodicity_query_ceiling(cfg.k_runs, cfg.verify_trials)
        ceilings = (c_ceil, q_ceil, None)
    else:
        P = Distribution(rng.dirichlet(np.ones(m)))
        f, P_hat = empirical_reconstruction(P, cfg.n, rng)
        err = l1_distance(P, P_hat)
        bound = math.sqrt(m / cfg.n)
        row.update(decision="WITHIN" if err <= bound else "ABOVE", classical_queries=0, quantum_queries=0)
        row.update(value=f"{err:.6f}", classical_ceiling="", quantum_ceiling="", total_ceiling="")
        if cfg.timing:
            row["wall_clock"] = f"{time.perf_counter() - start:.4f}"
        return row

    c_ceil, q_ceil, total = ceilings
    row.update(
        decision=verdict.decision,
        classical_queries=verdict.classical_queries,
        quantum_queries=verdict.quantum_queries,
        classical_ceiling="" if c_ceil is None else c_ceil,
        quantum_ceiling="" if q_ceil is None else q_ceil,
        total_ceiling="" if total is None else f"{total:.6g}",
        value=value,
    )
    over = (
        (c_ceil is not None and verdict.classical_queries > c_ceil)
        or (q_ceil is not None and verdict.quantum_queries > q_ceil)
        or (total is not None and verdict.classical_queries + verdict.quantum_queries > total)
    )
    if (verdict.classical_queries, verdict.quantum_queries) != f.counters():
        over = True
    row["violation"] = over
    if cfg.timing:
        row["wall_clock"] = f"{time.perf_counter() - start:.4f}"
    return row


def _summary(cfg: ExperimentConfig, label: str, expected: str, rows: list[dict]) -> dict:
    cq = np.array([r["classical_queries"] for r in rows], dtype=float)
    qq = np.array([r["quantum_queries"] for r in rows], dtype=float)
    if cfg.algorithm == "reconstruct":
        rate = float(np.mean([float(r["value"]) for r in rows]))
        value = f"mean_l1={rate:.6f};bound={math.sqrt(cfg.m / cfg.n):.6f}"
        accept = ""
    else:
        accept = f"{np.mean([r['decision'] == ACCEPT for r in rows]):.4f}"
        value = ""
    return {
        "row_type": "summary",
        "instance": label,
        "expected": expected,
        "trial": "",
        "seed": cfg.seed,
        "decision": "",
        "value": value,
        "accept_rate": accept,
        "mean_classical": f"{cq.mean():.2f}",
        "max_classical": int(cq.max()),
        "mean_quantum": f"{qq.mean():.2f}",
        "max_quantum": int(qq.max()),
    }


def run_experiment(cfg: ExperimentConfig, out=None) -> str:
    """Run every instance family for ``cfg.trials`` trials and write the CSV.

    ``out`` may be a path, an open text stream, or None (use ``cfg.out``; if
    that is empty too, only return the CSV text).  Rows are flushed as trials
    finish.  Raises :class:`InvariantViolation` after writing the offending row.
    """
    header = HEADER + (["wall_clock"] if cfg.timing else [])
    buf = io.StringIO()
    target = out if out is not None else (cfg.out or None)
    fh = open(target, "w", newline="") if isinstance(target, (str, Path)) else target
    writers = [csv.DictWriter(buf, header, extrasaction="ignore", lineterminator="\n")]
    if fh is not None:
        writers.append(csv.DictWriter(fh, header, extrasaction="ignore", lineterminator="\n"))

    def emit(row):
        row = {"experiment": cfg.experiment, **row}
        for w in writers:
            w.writerow(row)
        if fh is not None:
            fh.flush()

    try:
        for w in writers:
            w.writeheader()
        pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
        try:
            for index, (label, expected) in enumerate(_instances(cfg)):
                args = [(cfg, label, expected, index, t) for t in range(cfg.trials)]
                results = pool.map(_run_trial_star, args) if pool else map(_run_trial_star, args)
                rows = []
                for row in results:
                    row.setdefault("row_type", "trial")
                    emit(row)
                    rows.append(row)
                    if row.get("violation"):
                        raise InvariantViolation(f"query ceiling or accounting violated in {label} trial {row['trial']}")
                emit(_summary(cfg, label, expected, rows))
        finally:
            if pool:
                pool.shutdown()
    finally:
        if fh is not None and isinstance(target, (str, Path)):
            fh.close()
    return buf.getvalue()


def _run_trial_star(args):
    row = _run_trial(*args)
    row["row_type"] = "trial"
    return row


# ---------------------------------------------------------------------------
# Classical distinguishing experiment for the periodic / far distributions


def distinguisher_positions(q_budget: int, n: int) -> np.ndarray:
    """Baby steps 0..a-1 and giant steps a, 2a, ...: differences cover 1..a(q-a)."""
    q = min(q_budget, n)
    a = max(1, q // 2)
    baby = np.arange(a)
    giant = a * np.arange(1, q - a + 1)
    pos = np.unique(np.concatenate([baby, giant[giant < n]]))
    if pos.size < q:  # fill with the smallest unused points
        extra = np.setdiff1d(np.arange(n), pos)[: q - pos.size]
        pos = np.union1d(pos, extra)
    return pos


def _consistent_period(pos: np.ndarray, vals: np.ndarray, p: int) -> bool:
    res = pos % p
    pairs = np.unique(np.stack([res, vals]), axis=1)
    return pairs.shape[1] == np.unique(res).size == np.unique(vals).size


def classical_period_distinguisher(f, q_budget: int, r: int) -> bool:
    """Guess "periodic" iff some prime in [r/2, r] explains every observed (in)equality."""
    pos = distinguisher_positions(q_budget, f.n)
    vals = f.query_many(pos)
    order = np.argsort(vals, kind="stable")
    sv, sp = vals[order], pos[order]
    same = np.flatnonzero(sv[1:] == sv[:-1])
    if same.size == 0:
        return False
    diffs = np.unique(np.abs(sp[same + 1] - sp[same]))
    for p in gen.primes_between(math.ceil(r / 2), r):
        if np.any(diffs % p == 0) and _consistent_period(pos, vals, p):
            return True
    return False


def distinguish_experiment(q_budget: int, n: int, m: int, r: int, trials: int, rng, epsilon: float = 0.1, out=None) -> str:
    """Empirical success rate of the classical distinguisher on 50/50 D_P / D_N draws."""
    rng, seed = as_rng(rng)
    header = ["experiment", "row_type", "trial", "truth", "guess", "correct", "classical_queries", "value"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, header, lineterminator="\n")
    w.writeheader()
    correct = 0
    lo = max(1, math.ceil(r / 2))
    for trial in range(trials):
        periodic = bool(rng.random() < 0.5)
        if periodic:
            f, p = gen.gen_periodic_DP(n, m, r, rng)
        else:
            f, _ = gen.gen_random_DN(n, m, lo, r, epsilon, rng)
        guess = classical_period_distinguisher(f, q_budget, r)
        ok = guess == periodic
        correct += ok
        w.writerow(
            {
                "experiment": "distinguish",
                "row_type": "trial",
                "trial": trial,
                "truth": "P" if periodic else "N",
                "guess": "P" if guess else "N",
                "correct": int(ok),
                "classical_queries": f.classical_queries,
                "value": "",
            }
        )
    w.writerow(
        {
            "experiment": "distinguish",
            "row_type": "summary",
            "trial": "",
            "truth": "",
            "guess": "",
            "correct": "",
            "classical_queries": min(q_budget, n),
            "value": f"success_rate={correct / trials:.4f};seed={seed}",
        }
    )
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text)
    return text


def distinguish_success_rate(csv_text: str) -> float:
    for row in csv.DictReader(io.StringIO(csv_text)):
        if row["row_type"] == "summary":
            return float(row["value"].split(";")[0].split("=")[1])
    raise ValueError("no summary row")

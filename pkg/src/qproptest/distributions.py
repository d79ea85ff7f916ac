"""Distributions over [m], oracle functions f:[n] -> [m], and query accounting.

Indices are 0-based in memory: the domain is ``0..n-1`` and the range is
``0..m-1``.  File formats use 1-based values, matching the usual ``[m]``
notation.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

WEIGHT_TOL = 1e-9


def as_rng(rng) -> tuple[np.random.Generator, int | None]:
    """Accept a Generator or an integer seed; report the seed when known."""
    if isinstance(rng, np.random.Generator):
        return rng, None
    return np.random.default_rng(rng), (None if rng is None else int(rng))


def is_power_of_two(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


def ceil_cbrt(m: int) -> int:
    """Smallest integer t with t**3 >= m (float cube roots round badly, e.g. 27)."""
    if m <= 0:
        raise ValueError("m must be positive")
    t = max(1, int(round(m ** (1.0 / 3.0))))
    while t**3 < m:
        t += 1
    while t > 1 and (t - 1) ** 3 >= m:
        t -= 1
    return t


class OracleFunction:
    """A total function f:[n] -> [m] that can only be read through queries.

    Two counters are kept: classical evaluations and quantum oracle
    applications.  The table itself is immutable; use :meth:`fresh` to get a
    view with its own zeroed counters for a concurrent trial.
    """

    def __init__(self, values: Sequence[int] | np.ndarray, m: int):
        table = np.array(values, dtype=np.int64)
        if table.ndim != 1 or table.size == 0:
            raise ValueError("values must be a non-empty 1-d table")
        if m < 1:
            raise ValueError("m must be positive")
        if table.min() < 0 or table.max() >= m:
            raise ValueError(f"table entries must lie in 0..{m - 1}")
        table.setflags(write=False)
        self._table = table
        self.n = int(table.size)
        self.m = int(m)
        self.classical_queries = 0
        self.quantum_queries = 0

    @classmethod
    def _shared(cls, table: np.ndarray, m: int) -> "OracleFunction":
        obj = cls.__new__(cls)
        obj._table = table
        obj.n = int(table.size)
        obj.m = int(m)
        obj.classical_queries = 0
        obj.quantum_queries = 0
        return obj

    def fresh(self) -> "OracleFunction":
        """Same table, zeroed counters."""
        return OracleFunction._shared(self._table, self.m)

    def __repr__(self) -> str:
        return (
            f"OracleFunction(n={self.n}, m={self.m}, "
            f"classical={self.classical_queries}, quantum={self.quantum_queries})"
        )

    # -- query paths (charged) -------------------------------------------
    def query(self, x: int) -> int:
        if not 0 <= x < self.n:
            raise IndexError(f"domain point {x} outside 0..{self.n - 1}")
        self.classical_queries += 1
        return int(self._table[x])

    def query_many(self, xs: np.ndarray | Sequence[int]) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if xs.size and (xs.min() < 0 or xs.max() >= self.n):
            raise IndexError("domain point outside range")
        self.classical_queries += int(xs.size)
        return self._table[xs]

    def charge_quantum(self, count: int) -> None:
        if count < 0:
            raise ValueError("query charges are non-negative")
        self.quantum_queries += int(count)

    def counters(self) -> tuple[int, int]:
        return self.classical_queries, self.quantum_queries

    # -- white-box access (free; never used on a tester's decision path) --
    @property
    def table(self) -> np.ndarray:
        return self._table

    def preimage_counts(self) -> np.ndarray:
        return np.bincount(self._table, minlength=self.m)

    def require_power_of_two(self) -> None:
        if not is_power_of_two(self.n):
            raise ValueError(f"quantum operations need n a power of 2, got n={self.n}")

    # -- serialization ----------------------------------------------------
    def save_text(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            fh.write(f"{self.n} {self.m}\n")
            for v in self._table:
                fh.write(f"{int(v) + 1}\n")

    @classmethod
    def load_text(cls, path: str | Path) -> "OracleFunction":
        with open(path) as fh:
            n, m = (int(tok) for tok in fh.readline().split())
            vals = np.array([int(line) for line in fh if line.strip()], dtype=np.int64)
        if vals.size != n:
            raise ValueError(f"header says n={n} but file has {vals.size} values")
        if vals.size and (vals.min() < 1 or vals.max() > m):
            raise ValueError(f"values must lie in 1..{m}")
        return cls(vals - 1, m)

    def save_binary(self, path: str | Path) -> None:
        with open(path, "wb") as fh:
            fh.write(struct.pack("<II", self.n, self.m))
            fh.write((self._table + 1).astype("<u4").tobytes())

    @classmethod
    def load_binary(cls, path: str | Path) -> "OracleFunction":
        raw = Path(path).read_bytes()
        n, m = struct.unpack_from("<II", raw, 0)
        vals = np.frombuffer(raw, dtype="<u4", offset=8).astype(np.int64)
        if vals.size != n:
            raise ValueError(f"header says n={n} but file has {vals.size} values")
        if vals.size and (vals.min() < 1 or vals.max() > m):
            raise ValueError(f"values must lie in 1..{m}")
        return cls(vals - 1, m)


@dataclass(frozen=True, eq=False)
class Distribution:
    """Explicit probability vector over [m]."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty vector")
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def m(self) -> int:
        return int(self.weights.size)

    def __len__(self) -> int:
        return self.m

    def __getitem__(self, j):
        return self.weights[j]

    def mass(self, subset: Iterable[int]) -> float:
        idx = np.fromiter(subset, dtype=np.int64)
        return float(self.weights[idx].sum()) if idx.size else 0.0

    @classmethod
    def uniform(cls, m: int) -> "Distribution":
        return cls(np.full(m, 1.0 / m))

    @classmethod
    def from_counts(cls, counts: Sequence[int] | np.ndarray) -> "Distribution":
        counts = np.asarray(counts, dtype=np.int64)
        return cls(counts / counts.sum())

    def save_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "weight"])
            for j, p in enumerate(self.weights, start=1):
                w.writerow([j, repr(float(p))])

    @classmethod
    def load_csv(cls, path: str | Path) -> "Distribution":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        idx = [int(r["index"]) for r in rows]
        if idx != list(range(1, len(idx) + 1)):
            raise ValueError("indices must run 1..m in order")
        return cls(np.array([float(r["weight"]) for r in rows]))


@dataclass(frozen=True)
class BucketPartition:
    """Partition {M_0, ..., M_k} of [m]; empty buckets are kept."""

    epsilon: float
    m: int
    buckets: tuple[np.ndarray, ...]

    @property
    def k(self) -> int:
        return len(self.buckets) - 1

    def labels(self) -> np.ndarray:
        """Bucket index of every element of [m]."""
        lab = np.full(self.m, -1, dtype=np.int64)
        for i, b in enumerate(self.buckets):
            lab[b] = i
        return lab

    def nonempty(self) -> list[int]:
        return [i for i, b in enumerate(self.buckets) if b.size]

    def save_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["bucket_index", "member"])
            for i, b in enumerate(self.buckets):
                for j in b:
                    w.writerow([i, int(j) + 1])


def distribution_of(f: OracleFunction) -> Distribution:
    """P_f(j) = |f^{-1}(j)| / n, read white-box (no queries charged)."""
    counts = f.preimage_counts()
    return Distribution(counts / f.n)


def exact_distribution_of(f: OracleFunction) -> list[Fraction]:
    return [Fraction(int(c), f.n) for c in f.preimage_counts()]


def _same_size(P: Distribution, Q: Distribution) -> None:
    if P.m != Q.m:
        raise ValueError(f"size mismatch: {P.m} vs {Q.m}")


def l1_distance(P: Distribution, Q: Distribution) -> float:
    _same_size(P, Q)
    return float(np.abs(P.weights - Q.weights).sum())


def linf_distance(P: Distribution, Q: Distribution) -> float:
    _same_size(P, Q)
    return float(np.abs(P.weights - Q.weights).max())


def restrict(P: Distribution, M: Iterable[int]) -> Distribution:
    """Conditional distribution P|M, listed in the order of ``M``."""
    idx = np.fromiter(M, dtype=np.int64)
    total = P.weights[idx].sum() if idx.size else 0.0
    if total <= 0:
        raise ValueError("restriction to a zero-mass set is undefined")
    return Distribution(P.weights[idx] / total)


def coarse(P: Distribution, part: BucketPartition) -> Distribution:
    """Distribution over bucket indices {0..k} with value P(M_i)."""
    if part.m != P.m:
        raise ValueError(f"partition is over {part.m} elements, distribution over {P.m}")
    lab = part.labels()
    if np.any(lab < 0):
        raise ValueError("partition does not cover [m]")
    w = np.bincount(lab, weights=P.weights, minlength=part.k + 1)
    return Distribution(w / w.sum())


def partition_from_labels(labels: np.ndarray, n_parts: int, epsilon: float = 1.0) -> BucketPartition:
    labels = np.asarray(labels, dtype=np.int64)
    buckets = tuple(np.flatnonzero(labels == i) for i in range(n_parts))
    return BucketPartition(epsilon=epsilon, m=labels.size, buckets=buckets)


# ---------------------------------------------------------------------------
# Transcripts


@dataclass
class Step:
    label: str
    classical: int
    quantum: int
    estimates: dict = field(default_factory=dict)
    sub_verdicts: list = field(default_factory=list)


@dataclass
class TestVerdict:
    decision: str
    transcript: list[Step] = field(default_factory=list)
    seed: int | None = None

    __test__ = False  # not a pytest class

    @property
    def accepted(self) -> bool:
        return self.decision == ACCEPT

    @property
    def classical_queries(self) -> int:
        return sum(s.classical for s in self.transcript)

    @property
    def quantum_queries(self) -> int:
        return sum(s.quantum for s in self.transcript)


ACCEPT = "ACCEPT"
REJECT = "REJECT"


class Recorder:
    """Turns oracle counter deltas into transcript steps.

    Every call to :meth:`log` books the queries made since the previous call,
    so the transcript totals always equal the counter difference over the run.
    """

    def __init__(self, f: OracleFunction, seed: int | None = None):
        self.f = f
        self.seed = seed
        self.steps: list[Step] = []
        self._last = f.counters()

    def log(self, label: str, estimates: dict | None = None, sub_verdicts: list | None = None) -> Step:
        c, q = self.f.counters()
        step = Step(label, c - self._last[0], q - self._last[1], dict(estimates or {}), list(sub_verdicts or []))
        self._last = (c, q)
        self.steps.append(step)
        return step

    def verdict(self, decision: str, label: str = "decision", **estimates) -> TestVerdict:
        self.log(label, estimates)
        return TestVerdict(decision, self.steps, self.seed)

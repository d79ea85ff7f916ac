"""Quantum 1-1-periodicity testing via Shor-style period finding.

A function f:[n] -> [m] is 1-1-p-periodic when f(i) = f(j) iff i = j mod p.
The tester samples Fourier outcomes, turns each into a reduced fraction c/p
with continued fractions, combines denominators by LCM, and then checks the
candidate period classically with a constant number of queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .distributions import ACCEPT, REJECT, OracleFunction, Recorder, TestVerdict, as_rng
from .quantum import apply_oracle, value_register_size

DEFAULT_K_RUNS = 12
DEFAULT_VERIFY_TRIALS = 60


@dataclass(frozen=True)
class PeriodCandidate:
    p: int
    fractions: tuple[Fraction, ...] = field(default_factory=tuple)
    runs: int = 0


def is_1_1_periodic(f: OracleFunction, p: int) -> bool:
    """Exact white-box check: injective on [p] and f(i) = f(i mod p) everywhere."""
    if not 1 <= p <= f.n:
        return False
    table = f.table
    head = table[:p]
    if np.unique(head).size != p:
        return False
    return bool(np.array_equal(table, head[np.arange(f.n) % p]))


def period_bound(n: int) -> int:
    """floor(sqrt(n) / 2)."""
    return math.isqrt(n) // 2


def in_promise_range(p: int, n: int) -> bool:
    """sqrt(n)/4 <= p <= sqrt(n)/2, decided in integers."""
    return 16 * p * p >= n and 4 * p * p <= n


# ---------------------------------------------------------------------------
# Fourier sampling


def progression_outcome_distribution(n: int, start: int, step: int, count: int) -> np.ndarray:
    """Pr(y) after a QFT of the uniform state on {start + j*step : j < count}.

    |sum_j exp(2πi (start + j step) y / n)|² / (n count)
        = sin²(π count step y / n) / (n count sin²(π step y / n)).
    """
    y = np.arange(n, dtype=np.int64)
    a = (step * y) % n
    num = np.sin(np.pi * ((count * a) % n) / n) ** 2
    den = np.sin(np.pi * a / n) ** 2
    out = np.empty(n)
    zero = a == 0
    out[zero] = count / n
    out[~zero] = num[~zero] / (n * count * den[~zero])
    return out


def collapsed_outcome_distribution(n: int, support: np.ndarray) -> np.ndarray:
    """Pr(y) after a QFT of the uniform state on ``support`` (sorted indices)."""
    support = np.asarray(support, dtype=np.int64)
    K = support.size
    if K == 1:
        return np.full(n, 1.0 / n)
    steps = np.diff(support)
    if np.all(steps == steps[0]):
        return progression_outcome_distribution(n, int(support[0]), int(steps[0]), K)
    ind = np.zeros(n)
    ind[support] = 1.0
    amp = np.fft.ifft(ind, norm="ortho")
    return np.abs(amp) ** 2 / K


def shor_distribution(f: OracleFunction) -> np.ndarray:
    """Marginal of the measured first register, mixing over second-register outcomes."""
    f.require_power_of_two()
    out = np.zeros(f.n)
    order = np.argsort(f.table, kind="stable")
    _, starts = np.unique(f.table[order], return_index=True)
    for grp in np.split(order, starts[1:]):
        grp = np.sort(grp)
        out += (grp.size / f.n) * collapsed_outcome_distribution(f.n, grp)
    return out


def shor_statevector_distribution(f: OracleFunction) -> np.ndarray:
    """Same marginal from a dense two-register simulation (reference path)."""
    f.require_power_of_two()
    n, B = f.n, value_register_size(f.m)
    state = np.zeros(n * B, dtype=complex)
    state[np.arange(n) * B] = 1 / math.sqrt(n)
    state = apply_oracle(f, state).reshape(n, B)
    state = np.fft.ifft(state, axis=0, norm="ortho")
    return (np.abs(state) ** 2).sum(axis=1)


def shor_sample(f: OracleFunction, rng) -> int:
    """One round of period sampling: query in superposition, measure, QFT, measure.

    Costs 1 quantum query.
    """
    f.require_power_of_two()
    rng, _ = as_rng(rng)
    # the second-register outcome f(s) has probability |f^{-1}(f(s))| / n
    s = int(rng.integers(f.n))
    support = np.flatnonzero(f.table == f.table[s])
    probs = collapsed_outcome_distribution(f.n, support)
    f.charge_quantum(1)
    return int(rng.choice(f.n, p=probs / probs.sum()))


# ---------------------------------------------------------------------------
# Continued fractions


def continued_fraction(num: int, den: int) -> list[int]:
    """Partial quotients of num/den."""
    quotients = []
    while den:
        a, r = divmod(num, den)
        quotients.append(a)
        num, den = den, r
    return quotients


def convergents(quotients: list[int]) -> list[tuple[int, int]]:
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    out = []
    for a in quotients:
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append((h1, k1))
    return out


def closest_fraction(num: int, den: int, bound: int) -> Fraction:
    """Closest fraction to num/den with denominator <= bound; ties go to the smaller denominator.

    The answer is the last convergent within the bound or the best
    semiconvergent after it (the two Farey neighbours of num/den).
    """
    x = Fraction(num, den)
    if x.denominator <= bound:
        return x
    p0, q0, p1, q1 = 0, 1, 1, 0
    for a in continued_fraction(x.numerator, x.denominator):
        q2 = q0 + a * q1
        if q2 > bound:
            break
        p0, q0, p1, q1 = p1, q1, p0 + a * p1, q2
    a = (bound - q0) // q1
    semi = Fraction(p0 + a * p1, q0 + a * q1)
    conv = Fraction(p1, q1)
    d_semi, d_conv = abs(semi - x), abs(conv - x)
    if d_semi < d_conv or (d_semi == d_conv and semi.denominator < conv.denominator):
        return semi
    return conv


def cfe_recover(y: int, n: int, denom_bound: int) -> Fraction | None:
    """The reduced c/p with p <= denom_bound and |y/n - c/p| < 2/n, or None.

    When denom_bound <= sqrt(n)/2 at most one fraction qualifies.
    """
    if n < 1 or not 0 <= y < n:
        raise ValueError(f"need 0 <= y < n, got y={y}, n={n}")
    if denom_bound < 1:
        raise ValueError("denom_bound must be at least 1")
    frac = closest_fraction(y, n, denom_bound)
    if abs(y * frac.denominator - frac.numerator * n) < 2 * frac.denominator:
        return frac
    return None


# ---------------------------------------------------------------------------
# Period finding and verification


def find_period(f: OracleFunction, k_runs: int = DEFAULT_K_RUNS, rng=None) -> PeriodCandidate | None:
    """LCM of the denominators recovered from ``k_runs`` Fourier samples."""
    if k_runs < 1:
        raise ValueError("k_runs must be at least 1")
    f.require_power_of_two()
    rng, _ = as_rng(rng)
    bound = max(1, period_bound(f.n))
    fracs = []
    for _ in range(k_runs):
        frac = cfe_recover(shor_sample(f, rng), f.n, bound)
        if frac is not None:
            fracs.append(frac)
    if not fracs:
        return None
    p = math.lcm(*(fr.denominator for fr in fracs))
    if p > bound:
        return None
    return PeriodCandidate(p=p, fractions=tuple(fracs), runs=k_runs)


def verify_period(f: OracleFunction, p: int, trials: int = DEFAULT_VERIFY_TRIALS, rng=None) -> bool:
    """Constant-query check that f is 1-1-p-periodic.

    Half the trials compare f(i) with f(i + kp) for random i in [p] and k >= 1;
    the other half compare two distinct points of [p].  Each check costs 2
    classical queries; the first failing check ends the run.
    """
    if not 1 <= p <= f.n // 2:
        raise ValueError(f"need 1 <= p <= n/2, got p={p}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng, _ = as_rng(rng)
    n_inj = trials // 2 if p >= 2 else 0
    for _ in range(trials - n_inj):
        i = int(rng.integers(p))
        k = int(rng.integers(1, (f.n - 1 - i) // p + 1))
        if f.query(i) != f.query(i + k * p):
            return False
    for _ in range(n_inj):
        i, j = rng.choice(p, size=2, replace=False)
        if f.query(int(i)) == f.query(int(j)):
            return False
    return True


def periodicity_query_ceiling(k_runs: int = DEFAULT_K_RUNS, verify_trials: int = DEFAULT_VERIFY_TRIALS) -> tuple[int, int]:
    """(classical, quantum) per run; independent of n."""
    return 2 * verify_trials, k_runs


def test_periodicity(
    f: OracleFunction,
    epsilon: float = 0.1,
    rng=None,
    k_runs: int = DEFAULT_K_RUNS,
    verify_trials: int = DEFAULT_VERIFY_TRIALS,
) -> TestVerdict:
    """Accept f in P_{sqrt(n)/4, sqrt(n)/2}; reject f that is eps-far from it.

    ``epsilon`` only labels the run: the query budget is fixed by ``k_runs``
    and ``verify_trials``, and the guarantees are empirical at this scale.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    f.require_power_of_two()
    rng, seed = as_rng(rng)
    rec = Recorder(f, seed)
    cand = find_period(f, k_runs, rng)
    rec.log(
        "find_period",
        {
            "p": None if cand is None else cand.p,
            "fractions": [] if cand is None else [str(x) for x in cand.fractions],
            "epsilon": epsilon,
        },
    )
    if cand is None:
        return rec.verdict(REJECT, reason="no period")
    if not in_promise_range(cand.p, f.n):
        return rec.verdict(REJECT, reason="period outside range")
    ok = verify_period(f, cand.p, verify_trials, rng)
    rec.log("verify_period", {"p": cand.p, "passed": ok})
    return rec.verdict(ACCEPT if ok else REJECT)

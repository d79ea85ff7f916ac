"""Exact simulation of the quantum subroutines.

Two routes are provided for everything that matters statistically:

* closed-form outcome distributions (used by the testers), and
* small dense statevector simulations (used only to cross-check the first).

Amplitude estimation follows the standard counting construction: phase
estimation with ``M`` control values on the Grover iterate, whose eigenphases
are ``±2θ`` with ``sin²θ = t/n``.  The measured value ``y`` has probability
``½[F(y/M - θ/π) + F(y/M + θ/π)]`` with ``F(d) = sin²(Mπd) / (M² sin²(πd))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import hadamard

from .distributions import OracleFunction, is_power_of_two

STATE_TOL = 1e-9


def _check_state(state: np.ndarray, dim: int | None = None) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1:
        raise ValueError("statevector must be 1-d")
    if dim is not None and state.size != dim:
        raise ValueError(f"statevector has dim {state.size}, expected {dim}")
    norm = float(np.vdot(state, state).real)
    if abs(norm - 1.0) > STATE_TOL:
        raise ValueError(f"statevector norm² is {norm!r}")
    return state


def basis_state(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def value_register_size(m: int) -> int:
    """2**ceil(log2 m): enough basis states for the XOR target register."""
    return 1 << max(0, (m - 1).bit_length())


# ---------------------------------------------------------------------------
# Oracles


def apply_oracle(f: OracleFunction, state: np.ndarray) -> np.ndarray:
    """O_f: |x>|b> -> |x>|b XOR f(x)>; index = x * B + b.  Costs 1 quantum query."""
    f.require_power_of_two()
    B = value_register_size(f.m)
    psi = _check_state(state, f.n * B).reshape(f.n, B)
    out = np.empty_like(psi)
    b = np.arange(B)
    for x, fx in enumerate(f.table):
        out[x, b ^ int(fx)] = psi[x, b]
    f.charge_quantum(1)
    return out.reshape(-1)


def membership_oracle(f: OracleFunction, S, state: np.ndarray) -> np.ndarray:
    """U^S_f: flips the flag qubit on x with f(x) in S; index = 2x + b.

    Costs 2 quantum queries (compute and uncompute f).
    """
    f.require_power_of_two()
    psi = _check_state(state, 2 * f.n).reshape(f.n, 2)
    marked = np.isin(f.table, np.fromiter(S, dtype=np.int64))
    out = psi.copy()
    out[marked] = psi[marked][:, ::-1]
    f.charge_quantum(2)
    return out.reshape(-1)


# ---------------------------------------------------------------------------
# Fourier transform


def qft(state: np.ndarray) -> np.ndarray:
    """|x> -> dim^{-1/2} sum_y exp(2πi xy/dim) |y>."""
    state = _check_state(state)
    if not is_power_of_two(state.size):
        raise ValueError("qft needs a power-of-2 dimension")
    return np.fft.ifft(state, norm="ortho")


def inverse_qft(state: np.ndarray) -> np.ndarray:
    state = _check_state(state)
    if not is_power_of_two(state.size):
        raise ValueError("qft needs a power-of-2 dimension")
    return np.fft.fft(state, norm="ortho")


def qft_matrix(dim: int) -> np.ndarray:
    """Dense DFT matrix straight from the definition (reference path)."""
    x = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(x, x) / dim) / math.sqrt(dim)


# ---------------------------------------------------------------------------
# Amplitude estimation: closed form


@dataclass(frozen=True)
class CountEstimate:
    t_prime: float
    q: int
    ell: float
    y: int
    M: int


def phase_register_size(q: int) -> int:
    return 1 << max(0, (q - 1).bit_length())


def count_angle(n: int, t: int) -> float:
    return math.asin(math.sqrt(min(1.0, max(0.0, t / n))))


def count_error_bound(n: int, t: int, q: int, ell: float) -> float:
    """2πℓ sqrt(t(n-t))/q + π²ℓ² n/q²."""
    return 2 * math.pi * ell * math.sqrt(t * (n - t)) / q + math.pi**2 * ell**2 * n / q**2


def _fejer(M: int, frac: float, j: np.ndarray) -> np.ndarray:
    """Phase-estimation mass at offset j from floor(ωM), with ωM - floor(ωM) = frac."""
    j = np.asarray(j, dtype=float)
    if frac == 0.0:
        return (j == 0).astype(float)
    num = math.sin(math.pi * frac) ** 2
    return num / (M * M * np.sin(np.pi * (j - frac) / M) ** 2)


def _split(c: float) -> tuple[int, float]:
    b = math.floor(c)
    frac = c - b
    # treat round-off around an exact grid point as exact
    if frac < 1e-12:
        return b, 0.0
    if frac > 1 - 1e-12:
        return b + 1, 0.0
    return b, frac


def outcome_distribution(n: int, t: int, q: int) -> np.ndarray:
    """Pr(y) for y in 0..M-1, M = phase_register_size(q)."""
    _check_counting_args(n, t, q, 2.0)
    M = phase_register_size(q)
    omega = count_angle(n, t) / math.pi
    y = np.arange(M)
    probs = np.zeros(M)
    for sign in (1.0, -1.0):
        b, frac = _split(sign * omega * M)
        j = (y - b + M // 2 - 1) % M - (M // 2 - 1)  # signed offset in (-M/2, M/2]
        if M == 1:
            j = np.zeros(1)
        probs += 0.5 * _fejer(M, frac, j)
    return probs


def _sample_offsets(M: int, frac: float, size: int, rng: np.random.Generator, window: int) -> np.ndarray:
    """Draw offsets j in (-M/2, M/2] with Fejér weights, exactly."""
    if frac == 0.0 or M == 1:
        return np.zeros(size, dtype=np.int64)
    W = min(M // 2, window)
    js = np.arange(-W + 1, W + 1)
    pw = _fejer(M, frac, js)
    tail = max(0.0, 1.0 - pw.sum()) if W < M // 2 else 0.0
    probs = np.append(pw, tail)
    probs /= probs.sum()
    pick = rng.choice(probs.size, size=size, p=probs)
    out = np.empty(size, dtype=np.int64)
    in_window = pick < js.size
    out[in_window] = js[pick[in_window]]
    for i in np.flatnonzero(~in_window):
        out[i] = _sample_tail(M, frac, W, rng)
    return out


def _sample_tail(M: int, frac: float, W: int, rng: np.random.Generator) -> int:
    """Rejection sampler for offsets outside the window.

    Envelope 1/((j-frac)² - 1/4) telescopes, so its CDF inverts in closed
    form; sin(x) >= 2x/π on [0, π/2] makes it dominate the Fejér tail.
    """
    half = M // 2
    A = 1.0 / (W + 0.5 - frac)
    pos_mass = A - 1.0 / (half + 0.5 - frac)
    B = 1.0 / (W + frac - 0.5)
    neg_mass = B - 1.0 / (half - 1 + frac + 0.5)
    scale = math.sin(math.pi * frac) ** 2 / 4.0
    while True:
        u = rng.random() * (pos_mass + neg_mass)
        if u < pos_mass:
            j = math.ceil(1.0 / (A - u) - 0.5 + frac)
            j = min(max(j, W + 1), half)
        else:
            u -= pos_mass
            jn = math.ceil(1.0 / (B - u) - frac - 0.5)
            j = -min(max(jn, W), half - 1)
        d = j - frac
        target = float(_fejer(M, frac, np.array([j]))[0])
        if rng.random() * scale / (d * d - 0.25) <= target:
            return j


def sample_phase_outcomes(n: int, t: int, q: int, size: int, rng: np.random.Generator, window: int = 512) -> np.ndarray:
    """Draw ``size`` measured phase values y in 0..M-1."""
    M = phase_register_size(q)
    omega = count_angle(n, t) / math.pi
    branch = rng.random(size) < 0.5
    y = np.empty(size, dtype=np.int64)
    for sign, sel in ((1.0, branch), (-1.0, ~branch)):
        k = int(sel.sum())
        if not k:
            continue
        b, frac = _split(sign * omega * M)
        y[sel] = (b + _sample_offsets(M, frac, k, rng, window)) % M
    return y


def _check_counting_args(n: int, t: int, q: int, ell: float) -> None:
    if n < 1 or not 0 <= t <= n:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")
    if q < 1:
        raise ValueError("q must be at least 1")
    if not ell > 1:
        raise ValueError("ell must exceed 1")


def estimates_from_outcomes(n: int, q: int, y: np.ndarray) -> np.ndarray:
    M = phase_register_size(q)
    return n * np.sin(np.pi * np.asarray(y) / M) ** 2


def amplitude_estimate(
    n: int,
    t: int,
    q: int,
    ell: float,
    rng: np.random.Generator,
    oracle: OracleFunction | None = None,
    queries_per_call: int = 1,
) -> CountEstimate:
    """Sample the counting estimator t' for a marked set of size t out of n.

    The caller supplies t from its own oracle structure.  If ``oracle`` is
    given, it is charged ``q * queries_per_call`` quantum queries.
    """
    _check_counting_args(n, t, q, ell)
    y = int(sample_phase_outcomes(n, t, q, 1, rng)[0])
    t_prime = float(estimates_from_outcomes(n, q, np.array([y]))[0])
    t_prime = min(float(n), max(0.0, t_prime))
    if oracle is not None:
        oracle.charge_quantum(q * queries_per_call)
    return CountEstimate(t_prime=t_prime, q=q, ell=ell, y=y, M=phase_register_size(q))


# ---------------------------------------------------------------------------
# Amplitude estimation: dense statevector reference


def grover_iterate(f: OracleFunction, S) -> np.ndarray:
    """Q = -A S_0 A^{-1} S_chi on the x register as a dense matrix.

    S_chi is obtained by running the membership oracle against a |-> flag, so
    building Q charges 2n quantum queries to ``f`` (one call per basis column).
    """
    f.require_power_of_two()
    n = f.n
    A = hadamard(n) / math.sqrt(n)
    minus = np.array([1.0, -1.0]) / math.sqrt(2)
    s_chi = np.empty((n, n), dtype=complex)
    for x in range(n):
        col = np.kron(basis_state(n, x), minus)
        out = membership_oracle(f, S, col).reshape(n, 2)
        s_chi[:, x] = out[:, 0] * math.sqrt(2)
    s0 = np.eye(n)
    s0[0, 0] = -1
    return -A @ s0 @ A.T @ s_chi


def phase_estimation_distribution(f: OracleFunction, S, M: int) -> np.ndarray:
    """Full statevector phase estimation of the Grover iterate; Pr(y), y < M."""
    n = f.n
    Q = grover_iterate(f, S)
    psi = np.full(n, 1 / math.sqrt(n), dtype=complex)
    rows = np.empty((M, n), dtype=complex)
    for j in range(M):
        rows[j] = psi / math.sqrt(M)
        psi = Q @ psi
    out = np.fft.fft(rows, axis=0, norm="ortho")
    return (np.abs(out) ** 2).sum(axis=1)

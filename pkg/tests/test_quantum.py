import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qproptest import quantum
from qproptest.distributions import OracleFunction


def test_apply_oracle_basis_action_and_involution():
    f = OracleFunction([0, 1, 2, 5, 4, 3, 7, 6], 8)
    B = quantum.value_register_size(8)
    state = quantum.basis_state(8 * B, 3 * B + 0)
    out = quantum.apply_oracle(f, state)
    assert out[3 * B + 5] == 1
    assert np.allclose(quantum.apply_oracle(f, out), state)
    assert f.quantum_queries == 2


def test_apply_oracle_on_uniform_superposition(rng):
    f = OracleFunction(rng.integers(0, 6, size=16), 6)
    B = quantum.value_register_size(6)
    state = np.zeros(16 * B, dtype=complex)
    state[np.arange(16) * B] = 0.25
    out = quantum.apply_oracle(f, state)
    expected = np.zeros_like(out)
    expected[np.arange(16) * B + f.table] = 0.25
    assert np.allclose(out, expected)


def test_oracle_dimension_checks():
    f = OracleFunction([0, 1, 2, 3], 4)
    with pytest.raises(ValueError):
        quantum.apply_oracle(f, np.ones(5) / math.sqrt(5))
    with pytest.raises(ValueError):
        quantum.membership_oracle(f, [0], np.ones(6) / math.sqrt(6))


def test_membership_oracle_examples():
    f = OracleFunction([0, 0, 1, 1], 2)
    state = np.zeros(8, dtype=complex)
    state[0::2] = 0.5  # flag 0 everywhere
    assert np.allclose(quantum.membership_oracle(f, [], state), state)
    everything = quantum.membership_oracle(f, [0, 1], state)
    assert np.allclose(everything[1::2], 0.5)
    one = quantum.membership_oracle(f, [0], state)
    assert np.allclose(one, [0, 0.5, 0, 0.5, 0.5, 0, 0.5, 0])
    assert f.quantum_queries == 6


def test_qft_examples():
    zero = quantum.basis_state(8, 0)
    assert np.allclose(quantum.qft(zero), np.full(8, 1 / math.sqrt(8)))
    assert np.allclose(quantum.qft(np.full(8, 1 / math.sqrt(8))), zero)
    assert np.allclose(quantum.qft(quantum.basis_state(2, 1)), [1 / math.sqrt(2), -1 / math.sqrt(2)])
    with pytest.raises(ValueError):
        quantum.qft(np.ones(6) / math.sqrt(6))


@pytest.mark.parametrize("dim", [2, 16, 256, 4096])
def test_qft_round_trip_and_matrix(dim, rng):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    w = quantum.qft(v)
    assert np.linalg.norm(w) == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(quantum.inverse_qft(w), v, atol=1e-9)
    if dim <= 256:
        assert np.allclose(quantum.qft_matrix(dim) @ v, w, atol=1e-9)


@pytest.mark.parametrize("n,t,q", [(1024, 0, 64), (1024, 1024, 64), (64, 0, 5), (64, 64, 5)])
def test_amplitude_estimate_extremes(n, t, q, rng):
    for _ in range(50):
        assert quantum.amplitude_estimate(n, t, q, 4, rng).t_prime == pytest.approx(t, abs=1e-9)


@given(st.integers(1, 2048), st.integers(1, 700), st.data())
def test_outcome_distribution_is_normalized(n, q, data):
    t = data.draw(st.integers(0, n))
    probs = quantum.outcome_distribution(n, t, q)
    assert probs.size == quantum.phase_register_size(q)
    assert probs.min() >= -1e-15
    assert probs.sum() == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize(
    "table,m,S,M",
    [
        (list(range(16)), 16, [0, 1, 2, 3], 16),
        ([0] * 8 + [1] * 8, 2, [1], 32),
        ([3, 1, 2, 0, 1, 1, 2, 3], 4, [1], 8),
        (list(range(64)), 64, list(range(5)), 32),
    ],
)
def test_closed_form_matches_statevector(table, m, S, M):
    f = OracleFunction(table, m)
    dense = quantum.phase_estimation_distribution(f, S, M)
    t = int(np.isin(f.table, S).sum())
    analytic = quantum.outcome_distribution(f.n, t, M)
    assert 0.5 * np.abs(dense - analytic).sum() < 1e-6


def test_sampler_matches_distribution_including_tail(rng):
    n, t, q = 1024, 100, 4096
    probs = quantum.outcome_distribution(n, t, q)
    y = quantum.sample_phase_outcomes(n, t, q, 200_000, rng, window=8)
    emp = np.bincount(y, minlength=probs.size) / y.size
    assert 0.5 * np.abs(emp - probs).sum() < 0.01
    far = np.abs(((y - np.argmax(probs) + probs.size // 2) % probs.size) - probs.size // 2) > 20
    assert far.any()  # the rejection tail was exercised


def test_error_bound_grid_cell(rng):
    n, t, q, ell = 1024, 256, 128, 4
    y = quantum.sample_phase_outcomes(n, t, q, 10_000, rng)
    est = quantum.estimates_from_outcomes(n, q, y)
    rate = np.mean(np.abs(est - t) > quantum.count_error_bound(n, t, q, ell))
    assert rate <= 1 / (2 * (ell - 1))


def test_amplitude_estimate_charges_and_validates(rng):
    f = OracleFunction([0, 1], 2)
    quantum.amplitude_estimate(2, 1, 10, 4, rng, oracle=f, queries_per_call=2)
    assert f.quantum_queries == 20
    with pytest.raises(ValueError):
        quantum.amplitude_estimate(10, 11, 5, 4, rng)
    with pytest.raises(ValueError):
        quantum.amplitude_estimate(10, 1, 0, 4, rng)
    with pytest.raises(ValueError):
        quantum.amplitude_estimate(10, 1, 5, 1.0, rng)

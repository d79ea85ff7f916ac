import math
import warnings

import numpy as np
import pytest

from qproptest.bucketing import bucket
from qproptest.classical import (
    UndersampledWarning,
    classical_coarse_l1_test,
    classical_uniformity_collision,
    empirical_reconstruction,
    sample_distribution,
)
from qproptest.distributions import BucketPartition, Distribution, OracleFunction, l1_distance
from qproptest.generators import gen_matching_pair, gen_permutation, gen_two_to_one


def test_collision_baseline(rng):
    m = 4096
    assert all(classical_uniformity_collision(gen_permutation(m, rng), 256, rng).accepted for _ in range(50))
    budget = math.ceil(4 * math.sqrt(m))
    rej = sum(not classical_uniformity_collision(gen_two_to_one(m, rng), budget, rng).accepted for _ in range(200))
    assert rej / 200 >= 0.95
    low = sum(not classical_uniformity_collision(gen_two_to_one(m, rng), 2, rng).accepted for _ in range(500))
    assert low / 500 <= 0.02
    with pytest.raises(ValueError):
        classical_uniformity_collision(gen_permutation(8, rng), 1, rng)


def test_collision_baseline_counts_queries(rng):
    f = gen_permutation(64, rng)
    v = classical_uniformity_collision(f, 10, rng)
    assert v.classical_queries == 10 and v.quantum_queries == 0


def test_sampling_never_draws_zero_weight(rng):
    P = Distribution(np.array([0.0, 0.5, 0.0, 0.5]))
    xs = sample_distribution(P, 10_000, rng)
    assert set(np.unique(xs)) == {1, 3}


def test_reconstruction_point_mass(rng):
    w = np.zeros(10)
    w[4] = 1
    _, P_hat = empirical_reconstruction(Distribution(w), 100, rng)
    assert np.array_equal(P_hat.weights, w)


def test_reconstruction_mean_error(rng):
    P = Distribution.uniform(64)
    errs = [l1_distance(P, empirical_reconstruction(P, 4096, rng)[1]) for _ in range(500)]
    assert np.mean(errs) <= 1 / 8


def test_reconstruction_warns_when_undersampled(rng):
    with pytest.warns(UndersampledWarning):
        empirical_reconstruction(Distribution.uniform(64), 10, rng)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        empirical_reconstruction(Distribution.uniform(64), 64, rng)


def test_coarse_test_consistency(rng):
    eps = 0.25
    f, g = gen_matching_pair(1024, 64, rng)
    part = bucket(g, eps)
    ok = sum(classical_coarse_l1_test(f, g, part, eps, rng) for _ in range(100))
    assert ok >= 95


def test_coarse_test_disjoint_masses(rng):
    m = 16
    f = OracleFunction(np.arange(64) % 8, m)  # all mass on the first half
    w = np.zeros(m)
    w[8:] = 1 / 8
    g = Distribution(w)
    part = BucketPartition(0.5, m, (np.arange(8), np.arange(8, 16)))
    assert sum(not classical_coarse_l1_test(f, g, part, 0.5, rng) for _ in range(100)) >= 99


def test_coarse_test_single_part_always_true(rng):
    f = gen_two_to_one(16, rng)
    part = BucketPartition(0.5, 16, (np.arange(16),))
    assert all(classical_coarse_l1_test(f, Distribution.uniform(16), part, 0.5, rng) for _ in range(20))

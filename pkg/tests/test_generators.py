import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qproptest import generators as gen
from qproptest.distributions import Distribution, distribution_of, l1_distance, linf_distance
from qproptest.periodicity import is_1_1_periodic, verify_period


def test_permutation(rng):
    f = gen.gen_permutation(128, rng)
    assert np.array_equal(np.sort(f.table), np.arange(128))
    a, b = gen.gen_permutation(64, 5), gen.gen_permutation(64, 5)
    assert np.array_equal(a.table, b.table)


def test_two_to_one(rng):
    f = gen.gen_two_to_one(128, rng)
    counts = f.preimage_counts()
    assert set(np.unique(counts)) == {0, 2}
    assert l1_distance(distribution_of(f), Distribution.uniform(128)) == pytest.approx(1.0)
    assert gen.gen_two_to_one(2, rng).table.tolist() in ([0, 0], [1, 1])
    with pytest.raises(ValueError):
        gen.gen_two_to_one(7, rng)


@pytest.mark.parametrize("profile", ["uniform", "extreme"])
def test_linf_perturbed(profile, rng):
    n, m, eps = 16 * 256, 256, 0.5
    f = gen.gen_linf_perturbed_uniform(n, m, eps, rng, profile=profile)
    dev = np.abs(f.preimage_counts() - 16)
    assert dev.max() <= 2 and f.preimage_counts().sum() == n
    assert linf_distance(distribution_of(f), Distribution.uniform(m)) <= eps / (4 * m) + 1e-15


def test_linf_zero_perturbation_is_uniform(rng):
    f = gen.gen_linf_perturbed_uniform(64, 64, 0.5, rng)
    assert np.array_equal(f.preimage_counts(), np.ones(64))
    with pytest.raises(ValueError):
        gen.gen_linf_perturbed_uniform(100, 64, 0.5, rng)


def test_matching_pair_is_exact(rng):
    f, g = gen.gen_matching_pair(1024, 100, rng)
    assert np.array_equal(np.rint(g.weights * 1024).astype(int), f.preimage_counts())


def test_primes():
    assert gen.primes_between(16, 32) == [17, 19, 23, 29, 31]
    assert gen.primes_between(0, 1) == []


@given(st.integers(0, 2**32 - 1), st.sampled_from([(256, 8), (1024, 16), (4096, 32)]))
def test_periodic_dp(seed, nr):
    n, r = nr
    f, p = gen.gen_periodic_DP(n, 2**20, r, seed)
    assert p in gen.primes_between((r + 1) // 2, r)
    assert is_1_1_periodic(f, p)


def test_periodic_dp_errors(rng):
    with pytest.raises(ValueError):
        gen.gen_periodic_DP(64, 32, 8, rng)
    with pytest.raises(gen.GenerationError):
        gen.gen_periodic_DP(4096, 2**20, 1, rng)


def test_random_dn_is_far(rng):
    f, cert = gen.gen_random_DN(4096, 2**20, 16, 32, 0.1, rng)
    assert cert >= 0.1
    assert gen.certified_farness(f, 16, 32) >= 0.1
    rejected = sum(not verify_period(f, p, rng=rng) for p in range(16, 33) for _ in range(10))
    assert rejected / (17 * 10) >= 0.99


def test_distance_bound_is_sound(rng):
    # a periodic function with c corrupted points is at distance <= c from P_p
    f, p = gen.gen_periodic_DP(512, 2**20, 11, rng)
    table = f.table.copy()
    table[:5] = 2**20 - 1 - np.arange(5)
    g = type(f)(table, f.m)
    assert gen.periodic_distance_lower_bound(g, p) <= 5
    assert gen.periodic_distance_lower_bound(f, p) == 0


def test_random_dn_gives_up(rng):
    with pytest.raises(gen.GenerationError):
        gen.gen_random_DN(64, 64, 2, 4, 0.99, rng, max_redraws=3)

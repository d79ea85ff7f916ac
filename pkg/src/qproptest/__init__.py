"""Simulated quantum property testers for distributions and periodic functions."""

import sys

from .bucketing import bucket, num_buckets, thresholds
from .classical import (
    UndersampledWarning,
    classical_coarse_l1_test,
    classical_uniformity_collision,
    empirical_reconstruction,
)
from .distributions import (
    ACCEPT,
    REJECT,
    BucketPartition,
    Distribution,
    OracleFunction,
    Step,
    TestVerdict,
    coarse,
    distribution_of,
    exact_distribution_of,
    l1_distance,
    linf_distance,
    restrict,
)
from .generators import (
    gen_linf_perturbed_uniform,
    gen_matching_pair,
    gen_periodic_DP,
    gen_permutation,
    gen_random_DN,
    gen_two_to_one,
)
from .periodicity import (
    PeriodCandidate,
    cfe_recover,
    find_period,
    is_1_1_periodic,
    shor_sample,
    test_periodicity,
    verify_period,
)
from .quantum import amplitude_estimate, inverse_qft, qft
from .testers import (
    DEFAULT_CONFIG,
    TesterConfig,
    qestimate,
    test_known_closeness,
    test_uniformity,
    test_uniformity_amplified,
)

__all__ = [name for name, obj in dict(globals()).items() if not name.startswith("_") and not isinstance(obj, type(sys))]
del sys
__version__ = "0.1.0"

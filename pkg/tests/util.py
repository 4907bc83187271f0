"""Shared oracles for the test suite: enumeration and dense-tensor expansion."""

from itertools import product

import numpy as np

from tteda import TensorTrain


def random_tt(rng, local_dims, bond_dim, low=0.05, high=1.0):
    """Random strictly positive TT (entries bounded away from zero)."""
    n = len(local_dims)
    cores = []
    for k, d in enumerate(local_dims):
        rl = 1 if k == 0 else bond_dim
        rr = 1 if k == n - 1 else bond_dim
        cores.append(rng.uniform(low, high, size=(rl, d, rr)))
    return TensorTrain(cores)


def all_configs(local_dims):
    """Every index sequence of the product alphabet, as an int array."""
    return np.array(list(product(*[range(d) for d in local_dims])), dtype=int)


def enumerated_scores(tt):
    """Scores of every configuration, by brute-force per-config contraction."""
    configs = all_configs(tt.local_dims)
    return configs, np.array([tt.score(x) for x in configs])


def enumerated_probs(tt):
    """Exact induced distribution by full enumeration."""
    configs, scores = enumerated_scores(tt)
    return configs, scores / scores.sum()


def dense_tensor(tt):
    """Expand the TT into the full dense tensor, independent of tt.score."""
    dense = tt.cores[0]                     # (1, d_0, r_1)
    for core in tt.cores[1:]:
        dense = np.tensordot(dense, core, axes=([dense.ndim - 1], [0]))
    return dense[0, ..., 0]

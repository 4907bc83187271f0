"""Sequential conditional sampling from the TT-induced distribution.

Each draw fixes sites left to right: the unnormalized conditional weights at
site ``k`` are ``left . core_k(m) . right[k]`` over the local alphabet, the
site value is drawn from their normalization, and the left environment
absorbs the projected core.  Right environments are contracted once per
batch and shared read-only across draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateModelError
from .tensor_train import EnvironmentCache, TensorTrain

__all__ = ["SampleBatch", "MutationPolicy", "conditional_weights", "sample", "mutate"]


@dataclass
class SampleBatch:
    """A batch of sampled index sequences with their draw-time scores.

    ``objective_values`` is NaN-filled until the evaluation step runs.
    """

    configs: np.ndarray          # (K, L) int
    scores: np.ndarray           # (K,) float, score at draw time
    objective_values: np.ndarray  # (K,) float, NaN until evaluated

    def __post_init__(self):
        self.configs = np.asarray(self.configs, dtype=int)
        self.scores = np.asarray(self.scores, dtype=float)
        self.objective_values = np.asarray(self.objective_values, dtype=float)
        if self.configs.ndim != 2 or self.configs.shape[0] < 1:
            raise ValueError("configs must be a (K >= 1, L) array")
        if self.scores.shape != (self.size,) or self.objective_values.shape != (self.size,):
            raise ValueError("scores and objective_values must have one entry per config")

    @property
    def size(self) -> int:
        return self.configs.shape[0]


@dataclass(frozen=True)
class MutationPolicy:
    """Per-site mutation: redraw each site uniformly with probability ``epsilon``."""

    epsilon: float = 0.02

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")


def conditional_weights(tt: TensorTrain, left_env: np.ndarray, site: int,
                        cache: EnvironmentCache) -> np.ndarray:
    """Unnormalized conditional weights over the alphabet at ``site``.

    Entry ``m`` is ``left_env . core(m) . right[site]`` where ``left_env`` is
    the contraction of the already-fixed prefix.  Raises
    ``DegenerateModelError`` if the whole vector vanishes; callers repair by
    flooring the model rather than this function patching silently.
    """
    core = tt.cores[site]
    rl, d, rr = core.shape
    w = (left_env @ core.reshape(rl, d * rr)).reshape(d, rr) @ cache.right[site]
    if not np.any(w > 0):
        raise DegenerateModelError(
            f"all conditional weights vanish at site {site}"
        )
    return w


def sample(tt: TensorTrain, rng: np.random.Generator, batch_size: int) -> SampleBatch:
    """Draw ``batch_size`` independent index sequences from the induced distribution.

    Draws are vectorized across the batch but consume the generator
    site-by-site in a fixed order, so identical seeds give bitwise-identical
    batches.  Scores are evaluated on the drawn configurations before
    returning.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    n = len(tt)
    cache = tt.right_environments()
    lefts = np.ones((batch_size, 1))
    configs = np.empty((batch_size, n), dtype=int)
    for k in range(n):
        core = tt.cores[k]
        rl, d, rr = core.shape
        w = (lefts @ core.reshape(rl, d * rr)).reshape(batch_size, d, rr) @ cache.right[k]
        totals = w.sum(axis=1)
        if np.any(totals <= 0):
            raise DegenerateModelError(
                f"all conditional weights vanish at site {k} for some draw"
            )
        cum = np.cumsum(w, axis=1)
        u = rng.random(batch_size) * totals
        xk = np.minimum((u[:, None] >= cum).sum(axis=1), d - 1)
        configs[:, k] = xk
        lefts = np.einsum("na,anb->nb", lefts, core[:, xk, :])
        # guard against under/overflow on long chains; conditionals are scale-free
        norms = np.linalg.norm(lefts, axis=1, keepdims=True)
        if np.any(norms == 0):
            raise DegenerateModelError(
                f"a draw selected a zero-weight symbol at site {k}"
            )
        lefts /= norms
    scores = tt.score_batch(configs)
    return SampleBatch(configs, scores, np.full(batch_size, np.nan))


def mutate(tt: TensorTrain, batch: SampleBatch, policy: MutationPolicy,
           rng: np.random.Generator) -> SampleBatch:
    """Redraw each site of each config uniformly with probability epsilon.

    Scores of configs that actually changed are recomputed so the batch stays
    consistent with the model that will be updated from it.
    """
    if policy.epsilon == 0.0:
        return batch
    configs = batch.configs.copy()
    k_draws = rng.random(configs.shape) < policy.epsilon
    for k, d in enumerate(tt.local_dims):
        replacements = rng.integers(0, d, size=batch.size)
        configs[:, k] = np.where(k_draws[:, k], replacements, configs[:, k])
    scores = batch.scores.copy()
    changed = np.any(configs != batch.configs, axis=1)
    if np.any(changed):
        scores[changed] = tt.score_batch(configs[changed])
    return SampleBatch(configs, scores, batch.objective_values.copy())

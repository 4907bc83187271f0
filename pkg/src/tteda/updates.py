"""Elite selection and single-site gradient-ascent sweeps on TT cores.

The update raises the log-scores of elite configurations.  At each site the
gradient of the mean elite log-score is an outer product of per-elite
boundary environments divided by the elite's score, placed in the observed
physical slice.  An optional exactly-contracted log-partition term
interpolates between pure score ascent (weight 0) and a normalized
maximum-likelihood update (weight 1).  Cores are Frobenius-renormalized
after every site update, which leaves the induced distribution unchanged.

All environment products here are normalized to unit length as they are
built; the gradient ``outer(left, right) / score`` is invariant under any
rescaling of environment vectors as long as the score in the denominator is
contracted from the same vectors, so this guards against underflow on long
chains without changing the update.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateEliteError, DegenerateModelError
from .sampling import SampleBatch
from .tensor_train import TensorTrain

__all__ = [
    "EliteSet",
    "UpdateConfig",
    "select_elites",
    "elite_logscore_gradient",
    "log_partition_gradient",
    "update_direction",
    "clip_gradient",
    "sweep_update",
]


@dataclass
class EliteSet:
    """Top configurations of a batch, sorted by ascending objective value."""

    configs: np.ndarray  # (M, L) int
    values: np.ndarray   # (M,) float, ascending

    def __post_init__(self):
        self.configs = np.asarray(self.configs, dtype=int)
        self.values = np.asarray(self.values, dtype=float)
        if self.configs.ndim != 2 or self.configs.shape[0] < 1:
            raise ValueError("elite configs must be a (M >= 1, L) array")
        if self.values.shape != (self.configs.shape[0],):
            raise ValueError("one value per elite config required")
        if np.any(np.diff(self.values) < 0):
            raise ValueError("elite values must be sorted ascending")

    @property
    def size(self) -> int:
        return self.configs.shape[0]


@dataclass(frozen=True)
class UpdateConfig:
    """Hyperparameters of one call to :func:`sweep_update`.

    ``partition_weight`` is the coefficient of the log-partition-function
    term subtracted from the elite log-score gradient: 0 gives pure score
    ascent, 1 gives the normalized maximum-likelihood update direction.
    """

    learning_rate: float
    sweeps: int
    clip_norm: float | None = 10.0
    partition_weight: float = 0.0
    bidirectional: bool = False

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if self.clip_norm is not None and not self.clip_norm > 0:
            raise ValueError("clip_norm must be positive or None")
        if not 0.0 <= self.partition_weight <= 1.0:
            raise ValueError("partition_weight must lie in [0, 1]")


def select_elites(batch: SampleBatch, count: int) -> EliteSet:
    """The ``count`` lowest-objective configs; ties broken by batch order."""
    if count < 1:
        raise ValueError("elite count must be >= 1")
    if count > batch.size:
        raise ValueError(f"elite count {count} exceeds batch size {batch.size}")
    values = batch.objective_values
    if np.any(np.isnan(values)):
        raise ValueError("batch has unevaluated objective values")
    order = np.argsort(values, kind="stable")[:count]
    return EliteSet(batch.configs[order], values[order])


def clip_gradient(gradient: np.ndarray, clip_norm: float | None) -> np.ndarray:
    """Rescale to Frobenius norm ``clip_norm`` when exceeded; identity for None."""
    if clip_norm is None:
        return gradient
    norm = np.linalg.norm(gradient)
    if norm > clip_norm:
        return gradient * (clip_norm / norm)
    return gradient


def elite_logscore_gradient(tt: TensorTrain, elites: EliteSet, site: int) -> np.ndarray:
    """Gradient of the mean elite log-score with respect to the core at ``site``.

    For each elite the contribution is the outer product of its left and
    right boundary environments divided by its score, placed in the observed
    physical slice; slices never observed receive exactly zero.  Raises
    ``DegenerateEliteError`` if any elite has zero score (unreachable under
    the current model).
    """
    core = tt.cores[site]
    grad = np.zeros_like(core)
    n = len(tt)
    for i in range(elites.size):
        x = elites.configs[i]
        left = np.ones(1)
        for k in range(site):
            left = left @ tt.cores[k][:, x[k], :]
        right = np.ones(1)
        for k in range(n - 1, site, -1):
            right = tt.cores[k][:, x[k], :] @ right
        score = left @ core[:, x[site], :] @ right
        if score <= 0:
            raise DegenerateEliteError(
                f"elite {i} ({x.tolist()}) has zero score under the current model"
            )
        grad[:, x[site], :] += np.outer(left, right) / score
    grad /= elites.size
    return grad


def log_partition_gradient(tt: TensorTrain, site: int) -> np.ndarray:
    """Exact gradient of the log partition function w.r.t. the core at ``site``.

    The partition function is multilinear in each core, so the gradient is
    the outer product of the fully summed left and right environments,
    constant across the physical index, divided by the partition function.
    Computed by contraction, never by sampling.
    """
    z = tt.partition_function()
    left = np.ones(1)
    for k in range(site):
        left = left @ tt.cores[k].sum(axis=1)
    right = np.ones(1)
    for k in range(len(tt) - 1, site, -1):
        right = tt.cores[k].sum(axis=1) @ right
    outer = np.outer(left, right) / z
    return np.broadcast_to(outer[:, None, :], tt.cores[site].shape).copy()


def update_direction(tt: TensorTrain, elites: EliteSet, site: int,
                     partition_weight: float = 0.0) -> np.ndarray:
    """Pre-clip update direction applied at ``site``: elite gradient minus the
    weighted log-partition gradient."""
    grad = elite_logscore_gradient(tt, elites, site)
    if partition_weight:
        grad = grad - partition_weight * log_partition_gradient(tt, site)
    return grad


def sweep_update(tt: TensorTrain, elites: EliteSet, config: UpdateConfig) -> TensorTrain:
    """Single-site gradient-ascent sweeps over all cores; returns a new model.

    Each sweep passes left to right (plus right to left when bidirectional):
    the site core receives the clipped update direction scaled by the
    learning rate, is clamped at zero when the partition term can push
    entries negative, and is Frobenius-renormalized.  Per-elite environments
    on the moving side are refreshed incrementally after each site update;
    fixed-side environments are contracted once per pass.

    Elites whose score vanishes under the current cores are dropped from the
    gradient average with a warning instead of aborting the run.
    """
    cores = [c.copy() for c in tt.frobenius_renormalized().cores]
    dropped: set = set()
    for _ in range(config.sweeps):
        _sweep_pass(cores, elites, config, forward=True, dropped=dropped)
        if config.bidirectional:
            _sweep_pass(cores, elites, config, forward=False, dropped=dropped)
        for k, core in enumerate(cores):
            assert core.min() >= 0.0, f"core {k} went negative during a sweep"
    if dropped:
        warnings.warn(
            f"dropped zero-score elites {sorted(dropped)} from the gradient average",
            RuntimeWarning,
            stacklevel=2,
        )
    return TensorTrain(cores, validate=False)


def _sweep_pass(cores: list, elites: EliteSet, config: UpdateConfig,
                forward: bool, dropped: set) -> None:
    n = len(cores)
    lam = config.partition_weight
    m = elites.size

    fixed, alive = [], np.ones(m, dtype=bool)
    for i in range(m):
        envs = _projected_envs(cores, elites.configs[i], from_right=forward)
        if envs is None:
            alive[i] = False
            dropped.add(i)
        fixed.append(envs)
    model_fixed = _summed_envs(cores, from_right=forward) if lam else None

    moving = [np.ones(1) for _ in range(m)]
    model_moving = np.ones(1)
    order = range(n) if forward else range(n - 1, -1, -1)

    for k in order:
        core = cores[k]
        grad = np.zeros_like(core)
        for i in range(m):
            if not alive[i]:
                continue
            xk = elites.configs[i][k]
            left = moving[i] if forward else fixed[i][k]
            right = fixed[i][k] if forward else moving[i]
            s = left @ core[:, xk, :] @ right
            if s <= 0:
                alive[i] = False
                dropped.add(i)
                continue
            grad[:, xk, :] += np.outer(left, right) / s
        if used := int(alive.sum()):
            grad /= used
            if lam:
                ml = model_moving if forward else model_fixed[k]
                mr = model_fixed[k] if forward else model_moving
                z = ml @ core.sum(axis=1) @ mr
                if z <= 0:
                    raise DegenerateModelError("partition contraction vanished mid-sweep")
                grad -= lam * (np.outer(ml, mr) / z)[:, None, :]
            grad = clip_gradient(grad, config.clip_norm)
            core = core + config.learning_rate * grad
            if lam:
                np.maximum(core, 0.0, out=core)
            norm = np.linalg.norm(core)
            if norm == 0:
                raise DegenerateModelError(f"core {k} collapsed to zero during update")
            core = core / norm
            cores[k] = core

        for i in range(m):
            if not alive[i]:
                continue
            xk = elites.configs[i][k]
            vec = moving[i] @ core[:, xk, :] if forward else core[:, xk, :] @ moving[i]
            nrm = np.linalg.norm(vec)
            if nrm == 0:
                alive[i] = False
                dropped.add(i)
                continue
            moving[i] = vec / nrm
        if lam:
            summed = core.sum(axis=1)
            vec = model_moving @ summed if forward else summed @ model_moving
            nrm = np.linalg.norm(vec)
            if nrm == 0:
                raise DegenerateModelError("summed environment vanished mid-sweep")
            model_moving = vec / nrm


def _projected_envs(cores: list, x: np.ndarray, from_right: bool):
    """Unit-normalized environments of the fixed side, excluding each site.

    ``from_right=True`` gives right environments (suffix products), else left
    environments (prefix products).  Returns None when the projected chain
    annihilates, i.e. the configuration has zero score.
    """
    n = len(cores)
    envs = [None] * n
    if from_right:
        v = np.ones(1)
        envs[n - 1] = v
        for k in range(n - 2, -1, -1):
            v = cores[k + 1][:, x[k + 1], :] @ v
            nrm = np.linalg.norm(v)
            if nrm == 0:
                return None
            v = v / nrm
            envs[k] = v
    else:
        v = np.ones(1)
        envs[0] = v
        for k in range(1, n):
            v = v @ cores[k - 1][:, x[k - 1], :]
            nrm = np.linalg.norm(v)
            if nrm == 0:
                return None
            v = v / nrm
            envs[k] = v
    return envs


def _summed_envs(cores: list, from_right: bool) -> list:
    """Unit-normalized physically-summed environments, excluding each site."""
    n = len(cores)
    envs = [None] * n
    if from_right:
        v = np.ones(1)
        envs[n - 1] = v
        for k in range(n - 2, -1, -1):
            v = cores[k + 1].sum(axis=1) @ v
            nrm = np.linalg.norm(v)
            if nrm == 0:
                raise DegenerateModelError("summed right environment vanished")
            v = v / nrm
            envs[k] = v
    else:
        v = np.ones(1)
        envs[0] = v
        for k in range(1, n):
            v = v @ cores[k - 1].sum(axis=1)
            nrm = np.linalg.norm(v)
            if nrm == 0:
                raise DegenerateModelError("summed left environment vanished")
            v = v / nrm
            envs[k] = v
    return envs

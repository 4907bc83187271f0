"""The sample / evaluate / select / update optimization loop.

One run owns a single seeded generator, consumes its evaluation budget in
batches, and logs a convergence record per iteration.  Multi-run campaigns
execute the same configuration over consecutive seeds and aggregate
best-so-far curves into median and percentile bands on the shared
evaluation axis.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import DegenerateModelError
from .objectives import evaluate
from .sampling import MutationPolicy, mutate, sample
from .tensor_train import TensorTrain
from .updates import UpdateConfig, select_elites, sweep_update

__all__ = ["RunConfig", "ConvergenceRecord", "RunResult", "MultiRunResult",
           "optimize", "multi_run", "random_search"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Everything one optimization run needs.

    ``encoding`` supplies the per-site alphabets and decodes candidates;
    ``objective`` scores decoded candidates (smaller is better).
    """

    encoding: object
    objective: object
    batch_size: int            # candidates sampled per iteration
    elite_count: int           # updates driven by the best this many
    learning_rate: float
    sweeps: int
    bond_dim: int
    budget: int                # total objective evaluations allowed
    seed: int = 0
    mutation_rate: float = 0.02
    partition_weight: float = 0.0
    clip_norm: float | None = 10.0
    bidirectional: bool = False
    initial_fill: float = 1.0
    floor_delta: float = 1e-12
    target_stop: float | None = None
    initial_model: TensorTrain | None = None   # resume from a checkpoint

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not 1 <= self.elite_count <= self.batch_size:
            raise ValueError("need 1 <= elite_count <= batch_size")
        if self.budget < self.batch_size:
            raise ValueError("budget must cover at least one batch")
        if (self.initial_model is not None
                and self.initial_model.local_dims != list(self.encoding.local_dims)):
            raise ValueError("initial_model alphabets do not match the encoding")

    def update_config(self) -> UpdateConfig:
        return UpdateConfig(
            learning_rate=self.learning_rate,
            sweeps=self.sweeps,
            clip_norm=self.clip_norm,
            partition_weight=self.partition_weight,
            bidirectional=self.bidirectional,
        )


@dataclass
class ConvergenceRecord:
    """Per-iteration progress: cumulative evaluations, batch best, best so far."""

    iterations: np.ndarray
    evaluations: np.ndarray
    batch_best: np.ndarray
    best_so_far: np.ndarray


@dataclass
class RunResult:
    best_config: np.ndarray
    best_objective: float
    model: TensorTrain
    record: ConvergenceRecord
    wall_time: float
    seed: int


@dataclass
class MultiRunResult:
    runs: list
    evaluations: np.ndarray
    median: np.ndarray
    p16: np.ndarray
    p84: np.ndarray


def _sample_with_repair(tt: TensorTrain, rng, count: int, floor_delta: float):
    """One floor-and-retry on a degenerate model; second failure propagates."""
    try:
        return tt, sample(tt, rng, count)
    except DegenerateModelError as exc:
        log.warning("degenerate model during sampling (%s); applying floor %.1e", exc, floor_delta)
        tt = tt.with_floor(floor_delta)
        return tt, sample(tt, rng, count)


def optimize(config: RunConfig, on_iteration=None) -> RunResult:
    """Run the loop until the evaluation budget is spent.

    ``on_iteration(iteration, evaluations, batch_best, best_so_far, model)``
    is called after each iteration when provided.  Results are a pure
    function of the configuration: repeated calls are bitwise identical.
    """
    started = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    policy = MutationPolicy(config.mutation_rate)
    update_cfg = config.update_config()
    if config.initial_model is not None:
        tt = config.initial_model.copy()
    else:
        tt = TensorTrain.uniform(config.encoding.local_dims, config.bond_dim,
                                 config.initial_fill)

    best_value = np.inf
    best_config_found = None
    iterations, evaluations, batch_best, best_so_far = [], [], [], []
    spent = 0
    iteration = 0
    while spent < config.budget:
        count = min(config.batch_size, config.budget - spent)
        tt, batch = _sample_with_repair(tt, rng, count, config.floor_delta)
        batch = mutate(tt, batch, policy, rng)
        values = np.array([
            evaluate(config.objective, x, config.encoding) for x in batch.configs
        ])
        batch.objective_values[:] = values
        spent += count
        iteration += 1

        idx = int(np.argmin(values))
        if values[idx] < best_value:
            best_value = float(values[idx])
            best_config_found = batch.configs[idx].copy()
        iterations.append(iteration)
        evaluations.append(spent)
        batch_best.append(float(values[idx]))
        best_so_far.append(best_value)
        if on_iteration is not None:
            on_iteration(iteration, spent, batch_best[-1], best_value, tt)

        if config.target_stop is not None and best_value <= config.target_stop:
            break
        if spent >= config.budget:
            break
        elites = select_elites(batch, min(config.elite_count, count))
        tt = sweep_update(tt, elites, update_cfg)

    record = ConvergenceRecord(
        iterations=np.array(iterations, dtype=int),
        evaluations=np.array(evaluations, dtype=int),
        batch_best=np.array(batch_best),
        best_so_far=np.array(best_so_far),
    )
    return RunResult(
        best_config=best_config_found,
        best_objective=best_value,
        model=tt,
        record=record,
        wall_time=time.perf_counter() - started,
        seed=config.seed,
    )


def _run_with_seed(args):
    config, seed = args
    return optimize(replace(config, seed=seed))


def multi_run(config: RunConfig, n_runs: int, n_jobs: int = 1,
              on_iteration=None) -> MultiRunResult:
    """Independent runs with seeds ``seed .. seed + n_runs - 1``.

    Aggregates best-so-far over the common evaluation axis into the median
    and the 16th/84th percentiles.  ``n_jobs > 1`` executes runs in separate
    processes (0 means one per CPU); results are ordered by run index either
    way.  ``on_iteration(seed, iteration, evaluations, batch_best,
    best_so_far, model)`` streams progress and requires sequential mode.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    seeds = [config.seed + i for i in range(n_runs)]
    if n_jobs == 1 or n_runs == 1:
        runs = []
        for s in seeds:
            callback = None
            if on_iteration is not None:
                callback = (lambda *args, _seed=s: on_iteration(_seed, *args))
            runs.append(optimize(replace(config, seed=s), on_iteration=callback))
    else:
        if on_iteration is not None:
            raise ValueError("per-iteration callbacks require n_jobs=1")
        workers = None if n_jobs <= 0 else n_jobs
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run_with_seed, [(config, s) for s in seeds]))

    axis = runs[0].record.evaluations
    for r in runs[1:]:
        if not np.array_equal(r.record.evaluations, axis):
            raise RuntimeError("runs disagree on the evaluation axis; cannot aggregate")
    curves = np.vstack([r.record.best_so_far for r in runs])
    p16, med, p84 = np.percentile(curves, [16, 50, 84], axis=0)
    return MultiRunResult(runs=runs, evaluations=axis.copy(),
                          median=med, p16=p16, p84=p84)


def random_search(config: RunConfig) -> RunResult:
    """Uniform random baseline consuming the same budget; shares the record format."""
    started = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    dims = config.encoding.local_dims
    best_value = np.inf
    best_config_found = None
    iterations, evaluations, batch_best, best_so_far = [], [], [], []
    spent = 0
    iteration = 0
    while spent < config.budget:
        count = min(config.batch_size, config.budget - spent)
        configs = np.column_stack([rng.integers(0, d, size=count) for d in dims])
        values = np.array([
            evaluate(config.objective, x, config.encoding) for x in configs
        ])
        spent += count
        iteration += 1
        idx = int(np.argmin(values))
        if values[idx] < best_value:
            best_value = float(values[idx])
            best_config_found = configs[idx].copy()
        iterations.append(iteration)
        evaluations.append(spent)
        batch_best.append(float(values[idx]))
        best_so_far.append(best_value)
    record = ConvergenceRecord(
        iterations=np.array(iterations, dtype=int),
        evaluations=np.array(evaluations, dtype=int),
        batch_best=np.array(batch_best),
        best_so_far=np.array(best_so_far),
    )
    return RunResult(best_config_found, best_value, None, record,
                     time.perf_counter() - started, config.seed)

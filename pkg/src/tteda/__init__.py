"""Tensor-train sampling optimizer for discrete quantum optimal control.

A non-negative tensor train scores discrete control sequences; sampling the
induced distribution, selecting elites, and raising their scores by local
gradient sweeps biases the search toward high-performing regions.  Bundled
with it: control-field encodings (time series, piecewise, Fourier,
B-spline), four small quantum benchmark models (closed and open system),
five classical test functions, and a seeded multi-run engine.
"""

from .encodings import (ControlEncoding, FieldSpec, TimeGrid, ValueMap,
                        VectorEncoding, uniform_value_map)
from .engine import (MultiRunResult, RunConfig, RunResult, multi_run, optimize,
                     random_search)
from .exceptions import (DegenerateEliteError, DegenerateModelError,
                         EvaluationError, IntegrationAccuracyError)
from .presets import PROBLEM_NAMES, build_problem
from .sampling import MutationPolicy, SampleBatch, mutate, sample
from .tensor_train import EnvironmentCache, TensorTrain
from .updates import (EliteSet, UpdateConfig, clip_gradient,
                      elite_logscore_gradient, log_partition_gradient,
                      select_elites, sweep_update, update_direction)

__version__ = "0.1.0"

__all__ = [
    "ControlEncoding", "FieldSpec", "TimeGrid", "ValueMap", "VectorEncoding",
    "uniform_value_map",
    "MultiRunResult", "RunConfig", "RunResult", "multi_run", "optimize",
    "random_search",
    "DegenerateEliteError", "DegenerateModelError", "EvaluationError",
    "IntegrationAccuracyError",
    "PROBLEM_NAMES", "build_problem",
    "MutationPolicy", "SampleBatch", "mutate", "sample",
    "EnvironmentCache", "TensorTrain",
    "EliteSet", "UpdateConfig", "clip_gradient", "elite_logscore_gradient",
    "log_partition_gradient", "select_elites", "sweep_update",
    "update_direction",
]

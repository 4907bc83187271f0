"""Command-line front end: seeded campaigns driven by a JSON run spec.

Subcommands
-----------
``tteda run <spec.json>``
    Execute a multi-seed campaign and write data files (no plotting):

    * ``convergence.csv``: columns ``run_id,iteration,evaluations,batch_best,best_so_far``
    * ``summary.csv``: columns ``evaluations,median,p16,p84`` over runs
    * ``best_pulse.json``: decoded control samples per time step per field,
      plus the best index sequence and objective value
    * ``trajectory.csv``: level populations vs time of the best candidate
      (closed systems: squared amplitudes; open system: density-matrix
      diagonal including the sink).  Benchmark-function problems have no
      dynamics and skip this file.

``tteda toy``
    The 4-bit concentration demo: a uniform model updated toward the fixed
    elite set {0000, 0001, 0010, 0011}; prints pre/post empirical and
    enumerated distributions as CSV on stdout.

``tteda lambda-sweep <spec.json> --lambdas 0,1``
    Run the spec's problem once per partition-term weight with paired seeds
    and write a comparative ``summary.csv`` (extra leading ``lambda`` column).

Run-spec file (strict JSON; unknown keys are rejected)::

    {
      "problem": "single_qubit_resonant",   # or single_qubit_detuned, bell_pair,
                                            # qutrit_not, stirap, benchmark:<name>
      "physics":  { ... problem-specific overrides ... },
      "encoding": { "d": 2, "layout": "interleaved", ... },
      "optimizer": { "K": 12, "M": 2, "eta": 0.07, "sweeps": 10, "chi": 4,
                     "d": 2, "epsilon": 0.02, "lambda": 0.0, "clip": 10.0,
                     "budget": 1000 },
      "runs": { "n_runs": 20, "seed": 7 },
      "output_dir": "out",
      "checkpoint_every": 0                 # model checkpoints, 0 = off
    }

Every section except ``problem`` is optional; omitted physical and
optimizer values default to the reference campaign settings of the chosen
problem.  Output directory precedence: ``--out`` flag, then the spec's
``output_dir``, then the ``TTEDA_OUT`` environment variable, then the
current directory.

Model checkpoint files (and ``tteda.tensor_train.TensorTrain.save``) use a
single JSON object::

    {"format": "tteda-tensor-train", "version": 1,
     "local_dims": [d_1, ..., d_L],
     "cores": [{"shape": [r_left, d, r_right],
                "entries": [... row-major floats ...]}, ...]}

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .engine import RunConfig, multi_run
from .exceptions import (DegenerateModelError, EvaluationError,
                         IntegrationAccuracyError)
from .presets import PROBLEM_NAMES, build_problem
from .sampling import sample
from .tensor_train import TensorTrain
from .updates import EliteSet, UpdateConfig, sweep_update

__all__ = ["main"]

_OPTIMIZER_KEYS = {
    "K": "batch_size",
    "M": "elite_count",
    "eta": "learning_rate",
    "sweeps": "sweeps",
    "chi": "bond_dim",
    "epsilon": "mutation_rate",
    "lambda": "partition_weight",
    "clip": "clip_norm",
    "budget": "budget",
}
_SPEC_KEYS = ("problem", "physics", "encoding", "optimizer", "runs",
              "output_dir", "checkpoint_every")
_RUNS_KEYS = ("n_runs", "seed")


class SpecError(ValueError):
    """A malformed or inconsistent run-spec file."""


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _load_spec(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise SpecError(f"{path}: {exc}") from exc
    try:
        spec = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(spec, dict):
        raise SpecError(f"{path}: top level must be a JSON object")
    for key in spec:
        if key not in _SPEC_KEYS:
            raise SpecError(f"{path}: unknown key {key!r} (expected one of {_SPEC_KEYS})")
    if "problem" not in spec:
        raise SpecError(f"{path}: missing required key 'problem'")
    if spec["problem"] not in PROBLEM_NAMES:
        raise SpecError(
            f"{path}: unknown problem {spec['problem']!r}; choose from {PROBLEM_NAMES}"
        )
    for section in ("physics", "encoding", "optimizer", "runs"):
        if section in spec and not isinstance(spec[section], dict):
            raise SpecError(f"{path}: section {section!r} must be an object")
    optimizer = spec.get("optimizer", {})
    for key in optimizer:
        if key not in _OPTIMIZER_KEYS and key != "d":
            raise SpecError(
                f"{path}: optimizer: unknown key {key!r} "
                f"(expected one of {sorted(_OPTIMIZER_KEYS) + ['d']})"
            )
    runs = spec.get("runs", {})
    for key in runs:
        if key not in _RUNS_KEYS:
            raise SpecError(f"{path}: runs: unknown key {key!r} (expected {_RUNS_KEYS})")
    return spec


def _resolve_out_dir(args, spec: dict) -> Path:
    out = args.out or spec.get("output_dir") or os.environ.get("TTEDA_OUT") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _build_run_config(spec: dict, args) -> tuple:
    encoding_opts = dict(spec.get("encoding", {}))
    optimizer = dict(spec.get("optimizer", {}))
    if "d" in optimizer:
        if "d" in encoding_opts and encoding_opts["d"] != optimizer["d"]:
            raise SpecError("optimizer.d conflicts with encoding.d")
        encoding_opts["d"] = optimizer.pop("d")
    problem = build_problem(spec["problem"], spec.get("physics"), encoding_opts)

    settings = dict(problem.optimizer_defaults)
    for key, value in optimizer.items():
        settings[_OPTIMIZER_KEYS[key]] = value
    if args.budget is not None:
        settings["budget"] = args.budget

    runs = spec.get("runs", {})
    n_runs = int(runs.get("n_runs", 1))
    seed = int(runs.get("seed", 0))
    if args.seed is not None:
        seed = args.seed
    config = RunConfig(encoding=problem.encoding, objective=problem.objective,
                       seed=seed, **settings)
    return problem, config, n_runs


def _write_convergence(path: Path, result) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["run_id", "iteration", "evaluations", "batch_best",
                         "best_so_far"])
        for run_id, run in enumerate(result.runs):
            rec = run.record
            for i in range(rec.iterations.size):
                writer.writerow([
                    run_id,
                    int(rec.iterations[i]),
                    int(rec.evaluations[i]),
                    _fmt(rec.batch_best[i]),
                    _fmt(rec.best_so_far[i]),
                ])


def _write_summary(path: Path, result, lam: float | None = None,
                   append: bool = False) -> None:
    mode = "a" if append else "w"
    with open(path, mode, newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if not append:
            header = ["evaluations", "median", "p16", "p84"]
            if lam is not None:
                header = ["lambda"] + header
            writer.writerow(header)
        for i in range(result.evaluations.size):
            row = [int(result.evaluations[i]), _fmt(result.median[i]),
                   _fmt(result.p16[i]), _fmt(result.p84[i])]
            if lam is not None:
                row = [_fmt(lam)] + row
            writer.writerow(row)


def _write_best_pulse(path: Path, problem, result) -> None:
    best_run = min(result.runs, key=lambda r: (r.best_objective, r.seed))
    x = best_run.best_config
    payload = {
        "problem": problem.name,
        "objective": best_run.best_objective,
        "seed": best_run.seed,
        "config": [int(v) for v in x],
    }
    encoding = problem.encoding
    if hasattr(encoding, "grid"):
        fields = encoding.decode(x)
        payload["times"] = encoding.grid.times.tolist()
        payload["dt"] = encoding.grid.dt
        payload["fields"] = {name: u.tolist() for name, u in fields.items()}
        payload["coefficients"] = {
            name: c.tolist() for name, c in encoding.coefficients(x).items()
        }
    else:
        payload["vector"] = encoding.decode(x).tolist()
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _write_trajectory(path: Path, problem, result) -> bool:
    best_run = min(result.runs, key=lambda r: (r.best_objective, r.seed))
    trajectory = problem.population_trajectory(best_run.best_config)
    if trajectory is None:
        return False
    times, pops, labels = trajectory
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["time"] + list(labels))
        for i in range(times.size):
            writer.writerow([_fmt(times[i])] + [_fmt(p) for p in pops[i]])
    return True


def _make_checkpointer(out_dir: Path, every: int, base_seed: int):
    if every <= 0:
        return None

    def on_iteration(seed, iteration, evaluations, batch_best, best_so_far, model):
        if iteration % every == 0:
            run_id = seed - base_seed
            model.save(out_dir / f"model_run{run_id}_iter{iteration:06d}.json")

    return on_iteration


def cmd_run(args) -> int:
    spec = _load_spec(args.spec)
    problem, config, n_runs = _build_run_config(spec, args)
    out_dir = _resolve_out_dir(args, spec)
    every = int(spec.get("checkpoint_every", 0))
    checkpointer = _make_checkpointer(out_dir, every, config.seed)
    n_jobs = args.threads if checkpointer is None else 1
    result = multi_run(config, n_runs, n_jobs=n_jobs, on_iteration=checkpointer)
    _write_convergence(out_dir / "convergence.csv", result)
    _write_summary(out_dir / "summary.csv", result)
    _write_best_pulse(out_dir / "best_pulse.json", problem, result)
    _write_trajectory(out_dir / "trajectory.csv", problem, result)
    best = min(r.best_objective for r in result.runs)
    print(f"{problem.name}: {n_runs} runs, best objective {best:.6g}, "
          f"outputs in {out_dir}")
    return 0


def cmd_toy(args) -> int:
    """4-bit demo: uniform scores, fixed elites, before/after distributions."""
    dims = [2, 2, 2, 2]
    n_samples = 10_000
    tt = TensorTrain.uniform(dims, bond_dim=2)
    elites = EliteSet(
        configs=np.array([[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 0, 1, 1]]),
        values=np.zeros(4),
    )
    seed = args.seed if args.seed is not None else 0
    rng = np.random.default_rng(seed)

    def empirical(model):
        draws = sample(model, rng, n_samples).configs
        keys = draws @ np.array([8, 4, 2, 1])
        return np.bincount(keys, minlength=16) / n_samples

    def enumerated(model):
        scores = np.array([
            model.score([b >> 3 & 1, b >> 2 & 1, b >> 1 & 1, b & 1])
            for b in range(16)
        ])
        return scores / scores.sum()

    pre_emp, pre_exact = empirical(tt), enumerated(tt)
    updated = sweep_update(tt, elites, UpdateConfig(learning_rate=0.1, sweeps=10))
    post_emp, post_exact = empirical(updated), enumerated(updated)

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["config", "pre_empirical", "pre_enumerated",
                     "post_empirical", "post_enumerated"])
    for b in range(16):
        writer.writerow([
            format(b, "04b"), _fmt(pre_emp[b]), _fmt(pre_exact[b]),
            _fmt(post_emp[b]), _fmt(post_exact[b]),
        ])
    return 0


def cmd_lambda_sweep(args) -> int:
    spec = _load_spec(args.spec)
    try:
        lambdas = [float(v) for v in args.lambdas.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise SpecError(f"--lambdas: {exc}") from exc
    if not lambdas:
        raise SpecError("--lambdas needs at least one value")
    problem, config, n_runs = _build_run_config(spec, args)
    out_dir = _resolve_out_dir(args, spec)
    summary_path = out_dir / "summary.csv"
    for i, lam in enumerate(lambdas):
        result = multi_run(replace(config, partition_weight=lam), n_runs,
                           n_jobs=args.threads)
        _write_summary(summary_path, result, lam=lam, append=i > 0)
        best = min(r.best_objective for r in result.runs)
        print(f"{problem.name} lambda={lam:g}: best objective {best:.6g}")
    print(f"comparative summary in {summary_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tteda",
        description="Tensor-train sampling optimizer for discrete control problems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=None, help="override the base seed")
        p.add_argument("--budget", type=int, default=None,
                       help="override the evaluation budget")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--threads", type=int, default=1,
                       help="parallel runs (0 = one per CPU)")

    run_p = sub.add_parser("run", help="execute a campaign from a spec file")
    run_p.add_argument("spec", help="path to the JSON run spec")
    add_common(run_p)
    run_p.set_defaults(func=cmd_run)

    toy_p = sub.add_parser("toy", help="print the 4-bit concentration demo as CSV")
    toy_p.add_argument("--seed", type=int, default=None)
    toy_p.set_defaults(func=cmd_toy)

    sweep_p = sub.add_parser("lambda-sweep",
                             help="compare partition-term weights on one problem")
    sweep_p.add_argument("spec", help="path to the JSON run spec")
    sweep_p.add_argument("--lambdas", type=str, default="0,1",
                         help="comma-separated weights, e.g. 0,1")
    add_common(sweep_p)
    sweep_p.set_defaults(func=cmd_lambda_sweep)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateModelError, IntegrationAccuracyError, EvaluationError,
            FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

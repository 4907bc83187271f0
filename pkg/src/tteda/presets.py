"""Ready-made benchmark problems with their published default settings.

Each problem bundles a control encoding, an objective, and the optimizer
hyperparameters used in the reference campaigns.  Physical and encoding
parameters can be overridden selectively; unknown keys are rejected so
config files fail loudly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .encodings import (ControlEncoding, FieldSpec, TimeGrid, VectorEncoding,
                        uniform_value_map)
from .objectives import (BENCHMARK_BOUNDS, BenchmarkObjective,
                         GateSynthesisObjective, OpenTransferObjective,
                         StateTransferObjective)

__all__ = ["Problem", "PROBLEM_NAMES", "build_problem"]

PROBLEM_NAMES = (
    "single_qubit_resonant",
    "single_qubit_detuned",
    "bell_pair",
    "qutrit_not",
    "stirap",
) + tuple(f"benchmark:{name}" for name in BENCHMARK_BOUNDS)


@dataclass
class Problem:
    """A benchmark problem plus the optimizer defaults of its reference campaign."""

    name: str
    encoding: object
    objective: object
    optimizer_defaults: dict
    model: object = None
    trajectory_state: object = None   # initial state (vector or density matrix)

    def population_trajectory(self, x):
        """(times, populations, labels) of the best candidate, or None.

        Closed systems report squared amplitudes per level; the open system
        reports the density-matrix diagonal including the sink.  Gate
        problems propagate the lowest level as a representative initial
        state.  Benchmark functions have no dynamics.
        """
        if self.model is None:
            return None
        fields = self.encoding.decode(x)
        grid = self.encoding.grid
        times = grid.dt * np.arange(grid.n_steps + 1)
        if isinstance(self.objective, OpenTransferObjective):
            rhos = dynamics.lindblad_trajectory(
                self.model, fields, grid, self.trajectory_state,
                n_sub=self.objective.n_sub,
            )
            pops = np.real(np.einsum("tii->ti", rhos))
        else:
            states = dynamics.schrodinger_trajectory(
                self.model, fields, grid, self.trajectory_state
            )
            pops = np.abs(states) ** 2
        return times, pops, self.model.level_labels


def _take(options: dict, defaults: dict, section: str) -> dict:
    merged = dict(defaults)
    for key, value in (options or {}).items():
        if key not in defaults:
            raise ValueError(
                f"{section}: unknown key {key!r} (expected one of {sorted(defaults)})"
            )
        merged[key] = value
    return merged


def _single_qubit(name, detuning, total_time, d_levels, physics, encoding_opts,
                  defaults):
    phys = _take(physics, {
        "detuning": detuning,
        "max_amplitude": 1.0,
        "total_time": total_time,
        "n_steps": 28,
    }, f"{name}.physics")
    enc = _take(encoding_opts, {"d": d_levels, "layout": "interleaved"},
                f"{name}.encoding")
    model = dynamics.SingleQubit(detuning=phys["detuning"],
                                 max_amplitude=phys["max_amplitude"])
    grid = TimeGrid(phys["total_time"], phys["n_steps"])
    u0 = phys["max_amplitude"]
    encoding = ControlEncoding(
        fields=(FieldSpec("u", "time_series",
                          uniform_value_map(-u0, u0, enc["d"]),
                          phys["n_steps"]),),
        grid=grid,
        layout=enc["layout"],
    )
    objective = StateTransferObjective(
        model=model,
        initial_state=np.array([1.0, 0.0], dtype=complex),
        target_state=np.array([0.0, 1.0], dtype=complex),
    )
    return Problem(name, encoding, objective, defaults, model,
                   trajectory_state=objective.initial_state)


def _bell_pair(physics, encoding_opts, defaults):
    phys = _take(physics, {
        "coupling": 1.0,
        "total_time": 2.5,
        "n_steps": 30,
    }, "bell_pair.physics")
    enc = _take(encoding_opts, {
        "d": 40,
        "layout": "interleaved",
        "harmonics": 5,
        "coeff_min": -4.0,
        "coeff_max": 4.0,
    }, "bell_pair.encoding")
    model = dynamics.BellTriplet(coupling=phys["coupling"])
    grid = TimeGrid(phys["total_time"], phys["n_steps"])
    vmap = uniform_value_map(enc["coeff_min"], enc["coeff_max"], enc["d"])
    n_coeffs = 2 * enc["harmonics"] + 1
    encoding = ControlEncoding(
        fields=(
            FieldSpec("omega", "fourier", vmap, n_coeffs),
            FieldSpec("delta", "fourier", vmap, n_coeffs),
        ),
        grid=grid,
        layout=enc["layout"],
    )
    objective = StateTransferObjective(
        model=model,
        initial_state=np.array([1.0, 0.0, 0.0], dtype=complex),
        target_state=np.array([0.0, 1.0, 0.0], dtype=complex),
    )
    return Problem("bell_pair", encoding, objective, defaults, model,
                   trajectory_state=objective.initial_state)


def _qutrit_not(physics, encoding_opts, defaults):
    phys = _take(physics, {
        "anharmonicity": -1.0,
        "total_time": 12.5,
        "n_steps": 30,
    }, "qutrit_not.physics")
    scale = 0.5 * abs(phys["anharmonicity"])
    enc = _take(encoding_opts, {
        "d": 50,
        "layout": "interleaved",
        "segments": 5,
        "coeff_min": -scale,
        "coeff_max": scale,
    }, "qutrit_not.encoding")
    model = dynamics.QutritLadder(anharmonicity=phys["anharmonicity"])
    grid = TimeGrid(phys["total_time"], phys["n_steps"])
    vmap = uniform_value_map(enc["coeff_min"], enc["coeff_max"], enc["d"])
    encoding = ControlEncoding(
        fields=(
            FieldSpec("cx", "piecewise", vmap, enc["segments"]),
            FieldSpec("cy", "piecewise", vmap, enc["segments"]),
        ),
        grid=grid,
        layout=enc["layout"],
    )
    target = np.array(
        [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]], dtype=complex
    )
    objective = GateSynthesisObjective(model=model, target_unitary=target)
    return Problem("qutrit_not", encoding, objective, defaults, model,
                   trajectory_state=np.array([1.0, 0.0, 0.0], dtype=complex))


def _stirap(physics, encoding_opts, defaults):
    # n_sub=30: at these field and decay scales the integrator needs the
    # extra substeps to keep positivity violations well under the 1e-8
    # tolerance for arbitrary candidates
    phys = _take(physics, {
        "decay_rate": 5.0,
        "pump_detuning": 0.0,
        "total_time": 1.0,
        "n_steps": 30,
        "n_sub": 30,
    }, "stirap.physics")
    enc = _take(encoding_opts, {
        "d": 10,
        "layout": "interleaved",
        "n_coeffs": 10,
        "degree": 3,
        "omega_max": 20.0,
    }, "stirap.encoding")
    model = dynamics.StirapLadder(pump_detuning=phys["pump_detuning"],
                                  decay_rate=phys["decay_rate"])
    grid = TimeGrid(phys["total_time"], phys["n_steps"])
    vmap = uniform_value_map(0.0, enc["omega_max"], enc["d"])
    encoding = ControlEncoding(
        fields=(
            FieldSpec("omega_p", "spline", vmap, enc["n_coeffs"], degree=enc["degree"]),
            FieldSpec("omega_s", "spline", vmap, enc["n_coeffs"], degree=enc["degree"]),
        ),
        grid=grid,
        layout=enc["layout"],
    )
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[0, 0] = 1.0
    objective = OpenTransferObjective(model=model, initial_state=rho0,
                                      target_level=2, n_sub=phys["n_sub"])
    return Problem("stirap", encoding, objective, defaults, model,
                   trajectory_state=rho0)


def _benchmark(fn_name, physics, encoding_opts, defaults):
    phys = _take(physics, {"dimension": 10}, f"benchmark:{fn_name}.physics")
    lo, hi = BENCHMARK_BOUNDS[fn_name]
    enc = _take(encoding_opts, {"d": 16, "coeff_min": lo, "coeff_max": hi},
                f"benchmark:{fn_name}.encoding")
    encoding = VectorEncoding(
        value_map=uniform_value_map(enc["coeff_min"], enc["coeff_max"], enc["d"]),
        dimension=phys["dimension"],
    )
    return Problem(f"benchmark:{fn_name}", encoding, BenchmarkObjective(fn_name),
                   defaults)


def build_problem(name: str, physics: dict | None = None,
                  encoding: dict | None = None) -> Problem:
    """Assemble a named problem; overrides apply on the published defaults."""
    if name == "single_qubit_resonant":
        defaults = dict(batch_size=12, elite_count=2, learning_rate=0.07,
                        sweeps=10, bond_dim=4, budget=1000, mutation_rate=0.02)
        return _single_qubit(name, 0.0, np.pi, 2, physics, encoding, defaults)
    if name == "single_qubit_detuned":
        defaults = dict(batch_size=20, elite_count=2, learning_rate=0.06,
                        sweeps=20, bond_dim=5, budget=2000, mutation_rate=0.02)
        return _single_qubit(name, 1.0, np.pi * np.sqrt(2.0), 3, physics,
                             encoding, defaults)
    if name == "bell_pair":
        defaults = dict(batch_size=15, elite_count=3, learning_rate=0.06,
                        sweeps=10, bond_dim=2, budget=3000, mutation_rate=0.02)
        return _bell_pair(physics, encoding, defaults)
    if name == "qutrit_not":
        defaults = dict(batch_size=20, elite_count=2, learning_rate=0.07,
                        sweeps=10, bond_dim=4, budget=20000, mutation_rate=0.02)
        return _qutrit_not(physics, encoding, defaults)
    if name == "stirap":
        # mutation 0.1: the sub-0.1 infidelity basins sit barely below the
        # many 0.10-0.14 local optima, and the default 0.02 stalls there
        defaults = dict(batch_size=20, elite_count=2, learning_rate=0.06,
                        sweeps=10, bond_dim=5, budget=10000, mutation_rate=0.1)
        return _stirap(physics, encoding, defaults)
    if name.startswith("benchmark:"):
        fn_name = name.split(":", 1)[1]
        if fn_name not in BENCHMARK_BOUNDS:
            raise ValueError(f"unknown benchmark function {fn_name!r}")
        defaults = dict(batch_size=30, elite_count=5, learning_rate=0.05,
                        sweeps=5, bond_dim=4, budget=10000, mutation_rate=0.0)
        return _benchmark(fn_name, physics, encoding, defaults)
    raise ValueError(f"unknown problem {name!r}; expected one of {PROBLEM_NAMES}")

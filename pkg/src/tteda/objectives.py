"""Figures of merit for the control benchmarks and classical test functions.

Quantum objectives are infidelities in [0, 1]: state-transfer overlap loss,
six-axis-state average gate infidelity on an embedded qubit subspace, and
target-population loss for the open system.  The classical suite holds five
standard multimodal minimization benchmarks evaluated on a box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .encodings import ControlEncoding, VectorEncoding
from .exceptions import EvaluationError, IntegrationAccuracyError

__all__ = [
    "state_infidelity",
    "gate_infidelity",
    "open_infidelity",
    "benchmark_eval",
    "BENCHMARK_BOUNDS",
    "StateTransferObjective",
    "GateSynthesisObjective",
    "OpenTransferObjective",
    "BenchmarkObjective",
    "evaluate",
]


def state_infidelity(psi_final, target) -> float:
    """1 - |<target|psi>|^2; invariant under global phase."""
    overlap = np.vdot(np.asarray(target, dtype=complex), np.asarray(psi_final, dtype=complex))
    value = 1.0 - abs(overlap) ** 2
    assert -1e-9 <= value <= 1.0 + 1e-9, f"state infidelity {value} out of range"
    return float(value)


def _axis_states(dim: int) -> np.ndarray:
    """The six qubit-axis eigenstates embedded in the first two levels."""
    s = 1.0 / np.sqrt(2.0)
    qubit = np.array(
        [
            [s, s],          # +x
            [s, -s],         # -x
            [s, 1j * s],     # +y
            [s, -1j * s],    # -y
            [1.0, 0.0],      # +z
            [0.0, 1.0],      # -z
        ],
        dtype=complex,
    )
    states = np.zeros((6, dim), dtype=complex)
    states[:, :2] = qubit
    return states


def gate_infidelity(u_final, u_target) -> float:
    """Average gate infidelity over the six embedded qubit-axis states.

    Each term is the squared modulus of a same-state matrix element of
    ``u_target^dagger u_final``, so the value is insensitive to a global
    phase of either operator, and leakage out of the qubit subspace shows up
    as lost overlap.
    """
    u_final = np.asarray(u_final, dtype=complex)
    u_target = np.asarray(u_target, dtype=complex)
    states = _axis_states(u_final.shape[0])
    m = u_target.conj().T @ u_final
    overlaps = np.einsum("ji,ik,jk->j", states.conj(), m, states)
    value = 1.0 - float(np.mean(np.abs(overlaps) ** 2))
    assert -1e-9 <= value <= 1.0 + 1e-9, f"gate infidelity {value} out of range"
    return float(value)


def open_infidelity(rho_final, target_level: int) -> float:
    """1 - population of the target level in the final density matrix."""
    rho_final = np.asarray(rho_final, dtype=complex)
    value = 1.0 - float(np.real(rho_final[target_level, target_level]))
    assert -1e-6 <= value <= 1.0 + 1e-6, f"open-system infidelity {value} out of range"
    return float(value)


# standard search boxes, (lo, hi) per coordinate
BENCHMARK_BOUNDS = {
    "alpine": (-10.0, 10.0),
    "ackley": (-32.768, 32.768),
    "rastrigin": (-5.12, 5.12),
    "griewank": (-600.0, 600.0),
    "schwefel": (-500.0, 500.0),
}


def benchmark_eval(name: str, v) -> float:
    """Standard multimodal test functions (minimization convention)."""
    v = np.asarray(v, dtype=float)
    n = v.size
    if name == "alpine":
        return float(np.sum(np.abs(v * np.sin(v) + 0.1 * v)))
    if name == "ackley":
        return float(
            -20.0 * np.exp(-0.2 * np.sqrt(np.mean(v**2)))
            - np.exp(np.mean(np.cos(2.0 * np.pi * v)))
            + 20.0
            + np.e
        )
    if name == "rastrigin":
        return float(10.0 * n + np.sum(v**2 - 10.0 * np.cos(2.0 * np.pi * v)))
    if name == "griewank":
        i = np.arange(1, n + 1)
        return float(1.0 + np.sum(v**2) / 4000.0 - np.prod(np.cos(v / np.sqrt(i))))
    if name == "schwefel":
        return float(418.9829 * n - np.sum(v * np.sin(np.sqrt(np.abs(v)))))
    raise ValueError(f"unknown benchmark function {name!r}")


@dataclass(frozen=True)
class StateTransferObjective:
    """Infidelity of transferring ``initial_state`` to ``target_state``."""

    model: object
    initial_state: np.ndarray
    target_state: np.ndarray

    def __call__(self, fields, grid) -> float:
        psi, _ = dynamics.propagate_schrodinger(self.model, fields, grid, self.initial_state)
        return state_infidelity(psi, self.target_state)


@dataclass(frozen=True)
class GateSynthesisObjective:
    """Average gate infidelity against ``target_unitary`` on the qubit subspace."""

    model: object
    target_unitary: np.ndarray

    def __call__(self, fields, grid) -> float:
        _, u = dynamics.propagate_schrodinger(self.model, fields, grid, psi0=None)
        return gate_infidelity(u, self.target_unitary)


@dataclass(frozen=True)
class OpenTransferObjective:
    """Open-system population-transfer infidelity to ``target_level``."""

    model: dynamics.StirapLadder
    initial_state: np.ndarray  # density matrix
    target_level: int
    n_sub: int = 10

    def __call__(self, fields, grid) -> float:
        rho = dynamics.propagate_lindblad(
            self.model, fields, grid, self.initial_state, n_sub=self.n_sub
        )
        return open_infidelity(rho, self.target_level)


@dataclass(frozen=True)
class BenchmarkObjective:
    """Classical test function evaluated on the decoded coordinate vector."""

    name: str

    def __post_init__(self):
        if self.name not in BENCHMARK_BOUNDS:
            raise ValueError(f"unknown benchmark function {self.name!r}")

    def __call__(self, v) -> float:
        return benchmark_eval(self.name, v)


def evaluate(objective, x, encoding) -> float:
    """Decode one index sequence and return its objective value.

    One call costs one unit of the evaluation budget.  Deterministic: the
    propagators are fixed-step, so identical inputs give bitwise-identical
    values.  Failures are re-raised with the candidate attached.
    """
    try:
        if isinstance(encoding, VectorEncoding):
            return objective(encoding.decode(x))
        if isinstance(encoding, ControlEncoding):
            return objective(encoding.decode(x), encoding.grid)
        raise TypeError(f"unsupported encoding type {type(encoding).__name__}")
    except (AssertionError, ValueError, ArithmeticError, IntegrationAccuracyError) as exc:
        raise EvaluationError(
            f"objective evaluation failed for candidate {np.asarray(x).tolist()}: {exc}",
            candidate=np.asarray(x, dtype=int),
        ) from exc

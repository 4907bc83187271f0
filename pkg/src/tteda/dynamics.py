"""Benchmark Hamiltonians and closed/open-system propagation on a time grid.

Four small control models: a driven two-level system, the triplet-subspace
effective model of two Ising-coupled spins under a global drive, a weakly
anharmonic three-level ladder, and a lossy three-level lambda system with a
sink level for decayed population.

Closed-system steps use exact Hermitian eigendecomposition, so unitarity
holds to machine precision with no tolerance tuning.  The open system uses
classic fixed-step 4th-order integration of the vectorized master equation
with a configurable number of substeps per grid step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .encodings import TimeGrid
from .exceptions import IntegrationAccuracyError

__all__ = [
    "SingleQubit",
    "BellTriplet",
    "QutritLadder",
    "StirapLadder",
    "h_single_qubit",
    "h_bell",
    "h_qutrit",
    "h_stirap",
    "step_hamiltonians",
    "propagate_schrodinger",
    "schrodinger_trajectory",
    "propagate_lindblad",
    "lindblad_trajectory",
]


def h_single_qubit(u: float, detuning: float) -> np.ndarray:
    """Two-level Hamiltonian (detuning/2) sigma_z + (u/2) sigma_x."""
    return np.array(
        [[detuning / 2.0, u / 2.0], [u / 2.0, -detuning / 2.0]], dtype=complex
    )


def h_bell(omega: float, delta: float, coupling: float) -> np.ndarray:
    """Effective triplet-subspace Hamiltonian of two driven Ising-coupled spins.

    Ordered basis: both spins down, symmetric one-up state, both spins up.
    """
    s = omega / np.sqrt(2.0)
    return np.array(
        [[delta, s, 0.0], [s, 0.0, s], [0.0, s, 4.0 * coupling - delta]],
        dtype=complex,
    )


def h_qutrit(cx: float, cy: float, anharmonicity: float) -> np.ndarray:
    """Three-level ladder with quadrature drives and ladder couplings sqrt(n)."""
    h = np.zeros((3, 3), dtype=complex)
    h[2, 2] = anharmonicity
    for n in (1, 2):
        g = np.sqrt(n) / 2.0
        h[n - 1, n] += g * (cx - 1j * cy)
        h[n, n - 1] += g * (cx + 1j * cy)
    return h


def h_stirap(omega_p: float, omega_s: float, pump_detuning: float) -> np.ndarray:
    """Lambda-system Hamiltonian embedded in 4 levels (g, e, r, sink).

    Pump couples g-e, Stokes couples e-r; two-photon detuning is zero; the
    sink row and column stay zero (population only enters it via decay).
    """
    h = np.zeros((4, 4), dtype=complex)
    h[1, 1] = pump_detuning
    h[0, 1] = h[1, 0] = omega_p / 2.0
    h[1, 2] = h[2, 1] = omega_s / 2.0
    return h


@dataclass(frozen=True)
class SingleQubit:
    detuning: float = 0.0
    max_amplitude: float = 1.0

    dim = 2
    field_names = ("u",)
    level_labels = ("p0", "p1")

    def hamiltonian(self, u: float) -> np.ndarray:
        return h_single_qubit(u, self.detuning)


@dataclass(frozen=True)
class BellTriplet:
    coupling: float = 1.0

    dim = 3
    field_names = ("omega", "delta")
    level_labels = ("p_down_down", "p_one_up", "p_up_up")

    def __post_init__(self):
        if not self.coupling > 0:
            raise ValueError("coupling must be positive")

    def hamiltonian(self, omega: float, delta: float) -> np.ndarray:
        return h_bell(omega, delta, self.coupling)


@dataclass(frozen=True)
class QutritLadder:
    anharmonicity: float = -1.0

    dim = 3
    field_names = ("cx", "cy")
    level_labels = ("p0", "p1", "p2")

    def hamiltonian(self, cx: float, cy: float) -> np.ndarray:
        return h_qutrit(cx, cy, self.anharmonicity)


@dataclass(frozen=True)
class StirapLadder:
    pump_detuning: float = 0.0
    decay_rate: float = 5.0

    dim = 4
    field_names = ("omega_p", "omega_s")
    level_labels = ("p_g", "p_e", "p_r", "p_sink")

    def __post_init__(self):
        if self.decay_rate < 0:
            raise ValueError("decay_rate must be non-negative")

    def hamiltonian(self, omega_p: float, omega_s: float) -> np.ndarray:
        return h_stirap(omega_p, omega_s, self.pump_detuning)

    def jump_operator(self) -> np.ndarray:
        op = np.zeros((4, 4), dtype=complex)
        op[3, 1] = 1.0
        return op


@lru_cache(maxsize=None)
def _linear_field_basis(model) -> tuple:
    """Constant term and per-field operators of a field-linear Hamiltonian.

    Every model here is affine in its control fields, so the step
    Hamiltonians can be assembled as one broadcasted sum instead of a
    per-step rebuild.
    """
    zeros = [0.0] * len(model.field_names)
    constant = model.hamiltonian(*zeros)
    operators = []
    for i in range(len(model.field_names)):
        args = list(zeros)
        args[i] = 1.0
        operators.append(model.hamiltonian(*args) - constant)
    return constant, operators


def step_hamiltonians(model, fields: dict) -> np.ndarray:
    """Per-step Hamiltonians from zero-order-hold field samples."""
    samples = []
    for name in model.field_names:
        if name not in fields:
            raise ValueError(f"missing field {name!r} for {type(model).__name__}")
        values = np.asarray(fields[name], dtype=float)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"field {name!r} contains non-finite values")
        samples.append(values)
    n_steps = {s.size for s in samples}
    if len(n_steps) != 1:
        raise ValueError("all fields must share one grid length")
    n = n_steps.pop()
    constant, operators = _linear_field_basis(model)
    hams = np.broadcast_to(constant, (n, model.dim, model.dim)).copy()
    for values, op in zip(samples, operators):
        hams += values[:, None, None] * op
    return hams


def _step_unitaries(hams: np.ndarray, durations) -> np.ndarray:
    """exp(-i H t) per step via batched eigendecomposition; unitary to round-off."""
    w, v = np.linalg.eigh(hams)
    phases = np.exp(-1j * w * np.atleast_1d(durations)[:, None])
    return np.einsum("nij,nj,nkj->nik", v, phases, v.conj())


def propagate_schrodinger(model, fields: dict, grid: TimeGrid, psi0=None):
    """Closed-system propagation; returns (final state, total propagator).

    The propagator is the right-to-left product of exact per-step
    exponentials of the zero-order-hold Hamiltonians; runs of identical
    consecutive step Hamiltonians (piecewise encodings) are exponentiated
    once for their combined duration.  ``psi0=None`` skips the state and
    returns ``(None, U)``.
    """
    hams = step_hamiltonians(model, fields)
    if hams.shape[0] != grid.n_steps:
        raise ValueError("fields do not match the grid length")
    starts = [0]
    for k in range(1, grid.n_steps):
        if not np.array_equal(hams[k], hams[k - 1]):
            starts.append(k)
    counts = np.diff(starts + [grid.n_steps])
    runs = _step_unitaries(hams[starts], counts * grid.dt)
    u_total = runs[0]
    for k in range(1, len(starts)):
        u_total = runs[k] @ u_total
    drift = np.linalg.norm(u_total.conj().T @ u_total - np.eye(model.dim))
    assert drift < 1e-9, f"unitarity drift {drift:.2e}"
    if psi0 is None:
        return None, u_total
    psi = u_total @ np.asarray(psi0, dtype=complex)
    return psi, u_total


def schrodinger_trajectory(model, fields: dict, grid: TimeGrid, psi0) -> np.ndarray:
    """States after 0..n_steps steps, shape (n_steps + 1, dim)."""
    hams = step_hamiltonians(model, fields)
    steps = _step_unitaries(hams, np.full(grid.n_steps, grid.dt))
    psi = np.asarray(psi0, dtype=complex).copy()
    out = np.empty((grid.n_steps + 1, model.dim), dtype=complex)
    out[0] = psi
    for k in range(grid.n_steps):
        psi = steps[k] @ psi
        out[k + 1] = psi
    return out


def _liouvillians(hams: np.ndarray, gamma: float, jump: np.ndarray) -> np.ndarray:
    """Batched generators of the vectorized master equation (row-major vec)."""
    n, d, _ = hams.shape
    eye = np.eye(d)
    h_kron_eye = np.einsum("nij,kl->nikjl", hams, eye).reshape(n, d * d, d * d)
    eye_kron_ht = np.einsum("ij,nlk->nikjl", eye, hams).reshape(n, d * d, d * d)
    gen = -1j * (h_kron_eye - eye_kron_ht)
    if gamma:
        jdj = jump.conj().T @ jump
        dissipator = (gamma / 2.0) * (
            2.0 * np.kron(jump, jump.conj())
            - np.kron(jdj, eye)
            - np.kron(eye, jdj.T)
        )
        gen = gen + dissipator
    return gen


def _matrix_power_batched(m: np.ndarray, exponent: int) -> np.ndarray:
    result = None
    base = m
    while exponent:
        if exponent & 1:
            result = base.copy() if result is None else result @ base
        exponent >>= 1
        if exponent:
            base = base @ base
    return result


def _step_transfers(model: StirapLadder, hams: np.ndarray, dt: float,
                    n_sub: int) -> np.ndarray:
    """Per-grid-step transfer matrices of the fixed-step RK4 integration.

    On a linear constant-coefficient system the classic RK4 substep equals
    the degree-4 Taylor polynomial of exp(h * generator), so a grid step is
    that polynomial raised to the substep count.
    """
    gen = _liouvillians(hams, model.decay_rate, model.jump_operator())
    a = (dt / n_sub) * gen
    a2 = a @ a
    eye = np.eye(gen.shape[1], dtype=complex)
    substep = eye + a + a2 / 2.0 + (a2 @ a) / 6.0 + (a2 @ a2) / 24.0
    return _matrix_power_batched(substep, n_sub)


def _lindblad_steps(model: StirapLadder, fields: dict, grid: TimeGrid, rho0,
                    n_sub: int):
    """Yield the density matrix after each grid step, checking trace drift."""
    hams = step_hamiltonians(model, fields)
    if hams.shape[0] != grid.n_steps:
        raise ValueError("fields do not match the grid length")
    if n_sub < 1:
        raise ValueError("n_sub must be >= 1")
    transfers = _step_transfers(model, hams, grid.dt, n_sub)
    rho = np.asarray(rho0, dtype=complex).ravel(order="C").copy()
    for k in range(grid.n_steps):
        rho = transfers[k] @ rho
        drift = abs(np.trace(rho.reshape(model.dim, model.dim)) - 1.0)
        if drift > 1e-6:
            raise IntegrationAccuracyError(
                f"trace drift {drift:.2e} exceeds 1e-6; raise n_sub (currently {n_sub})"
            )
        yield rho.reshape(model.dim, model.dim)


def propagate_lindblad(model: StirapLadder, fields: dict, grid: TimeGrid, rho0,
                       n_sub: int = 10) -> np.ndarray:
    """Open-system propagation of a density matrix; returns rho at final time.

    The final state is checked for Hermiticity (1e-9) and positivity up to
    integration noise (eigenvalues above -1e-8); violations raise
    ``IntegrationAccuracyError``.
    """
    rho = np.asarray(rho0, dtype=complex)
    for rho in _lindblad_steps(model, fields, grid, rho0, n_sub):
        pass
    herm = np.linalg.norm(rho - rho.conj().T)
    if herm > 1e-9:
        raise IntegrationAccuracyError(f"hermiticity drift {herm:.2e} exceeds 1e-9")
    lowest = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)[0]
    if lowest < -1e-8:
        raise IntegrationAccuracyError(f"negative eigenvalue {lowest:.2e} below -1e-8")
    return rho


def lindblad_trajectory(model: StirapLadder, fields: dict, grid: TimeGrid, rho0,
                        n_sub: int = 10) -> np.ndarray:
    """Density matrices after 0..n_steps steps, shape (n_steps + 1, dim, dim)."""
    out = np.empty((grid.n_steps + 1, model.dim, model.dim), dtype=complex)
    out[0] = np.asarray(rho0, dtype=complex)
    for k, rho in enumerate(_lindblad_steps(model, fields, grid, rho0, n_sub)):
        out[k + 1] = rho
    return out

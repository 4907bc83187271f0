import numpy as np
import pytest

from tteda import IntegrationAccuracyError
from tteda.dynamics import (BellTriplet, QutritLadder, SingleQubit,
                            StirapLadder, h_bell, h_qutrit, h_single_qubit,
                            h_stirap, lindblad_trajectory, propagate_lindblad,
                            propagate_schrodinger, schrodinger_trajectory,
                            step_hamiltonians)
from tteda.encodings import TimeGrid

RNG = np.random.default_rng(70)


def hermitian(h):
    return np.abs(h - h.conj().T).max() < 1e-14


class TestHamiltonians:
    def test_single_qubit_zero(self):
        np.testing.assert_array_equal(h_single_qubit(0.0, 0.0), np.zeros((2, 2)))

    def test_single_qubit_drive(self):
        h = h_single_qubit(1.0, 0.0)
        np.testing.assert_allclose(h, [[0.0, 0.5], [0.5, 0.0]])

    def test_single_qubit_eigenvalues(self):
        for u, delta in RNG.uniform(-3, 3, size=(10, 2)):
            w = np.linalg.eigvalsh(h_single_qubit(u, delta))
            expected = np.sqrt(delta**2 + u**2) / 2.0
            np.testing.assert_allclose(w, [-expected, expected], atol=1e-12)

    def test_bell_zero_drive_diagonal(self):
        h = h_bell(0.0, 0.7, 1.0)
        np.testing.assert_allclose(h, np.diag([0.7, 0.0, 4.0 - 0.7]))

    def test_bell_corner_entries(self):
        h = h_bell(1.3, 2.0, 1.0)
        assert h[0, 0] == pytest.approx(2.0)
        assert h[2, 2] == pytest.approx(2.0)  # 4*coupling - detuning
        assert h[0, 1] == pytest.approx(1.3 / np.sqrt(2.0))
        assert h[0, 2] == 0.0

    def test_bell_hermitian(self):
        for omega, delta in RNG.uniform(-4, 4, size=(10, 2)):
            assert hermitian(h_bell(omega, delta, 1.0))

    def test_qutrit_zero_drive(self):
        np.testing.assert_allclose(h_qutrit(0.0, 0.0, -1.0), np.diag([0, 0, -1.0]))

    def test_qutrit_ladder_factor(self):
        # the 1-2 coupling carries sqrt(2) relative to 0-1
        h = h_qutrit(0.4, 0.0, -1.0)
        assert abs(h[1, 2]) / abs(h[0, 1]) == pytest.approx(np.sqrt(2.0))
        h = h_qutrit(0.0, 0.3, -1.0)
        assert abs(h[1, 2]) / abs(h[0, 1]) == pytest.approx(np.sqrt(2.0))

    def test_qutrit_quadrature_phase(self):
        h = h_qutrit(0.0, 1.0, 0.0)
        assert h[1, 0] == pytest.approx(0.5j)
        assert h[0, 1] == pytest.approx(-0.5j)

    def test_qutrit_hermitian(self):
        for cx, cy in RNG.uniform(-1, 1, size=(10, 2)):
            assert hermitian(h_qutrit(cx, cy, -1.0))

    def test_stirap_zero(self):
        np.testing.assert_array_equal(h_stirap(0.0, 0.0, 0.0), np.zeros((4, 4)))

    def test_stirap_dark_state(self):
        omega_p, omega_s = 3.0, 4.0
        h = h_stirap(omega_p, omega_s, 0.7)
        dark = np.array([omega_s, 0.0, -omega_p, 0.0]) / 5.0
        np.testing.assert_allclose(h @ dark, np.zeros(4), atol=1e-14)

    def test_stirap_sink_decoupled(self):
        h = h_stirap(2.0, 3.0, 1.0)
        np.testing.assert_array_equal(h[3, :], 0.0)
        np.testing.assert_array_equal(h[:, 3], 0.0)
        assert hermitian(h)

    def test_step_hamiltonians_match_scalar(self):
        cases = [
            (SingleQubit(detuning=0.6), {"u": RNG.uniform(-1, 1, 6)}),
            (BellTriplet(coupling=1.2),
             {"omega": RNG.uniform(-4, 4, 6), "delta": RNG.uniform(-4, 4, 6)}),
            (QutritLadder(anharmonicity=-0.9),
             {"cx": RNG.uniform(-1, 1, 6), "cy": RNG.uniform(-1, 1, 6)}),
            (StirapLadder(pump_detuning=0.2, decay_rate=3.0),
             {"omega_p": RNG.uniform(0, 20, 6), "omega_s": RNG.uniform(0, 20, 6)}),
        ]
        for model, fields in cases:
            hams = step_hamiltonians(model, fields)
            for k in range(6):
                args = [fields[name][k] for name in model.field_names]
                np.testing.assert_allclose(hams[k], model.hamiltonian(*args),
                                           atol=1e-14)

    def test_non_finite_field_rejected(self):
        model = SingleQubit()
        with pytest.raises(ValueError):
            step_hamiltonians(model, {"u": np.array([0.0, np.nan])})

    def test_missing_field_rejected(self):
        with pytest.raises(ValueError):
            step_hamiltonians(SingleQubit(), {})


class TestClosedPropagation:
    def test_zero_fields_identity(self):
        model = SingleQubit(detuning=0.0)
        grid = TimeGrid(np.pi, 12)
        psi, u = propagate_schrodinger(model, {"u": np.zeros(12)}, grid,
                                       np.array([1.0, 0.0]))
        np.testing.assert_allclose(u, np.eye(2), atol=1e-14)
        np.testing.assert_allclose(psi, [1.0, 0.0], atol=1e-14)

    def test_resonant_pi_pulse(self):
        # constant drive at the maximum amplitude for T = pi / u0 transfers
        # the ground state to the excited state exactly
        model = SingleQubit(detuning=0.0, max_amplitude=1.0)
        grid = TimeGrid(np.pi, 28)
        psi, _ = propagate_schrodinger(model, {"u": np.ones(28)}, grid,
                                       np.array([1.0, 0.0]))
        assert abs(psi[1]) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_unitarity_random_fields(self):
        model = BellTriplet(coupling=1.0)
        grid = TimeGrid(2.5, 30)
        for _ in range(25):
            fields = {"omega": RNG.uniform(-4, 4, 30),
                      "delta": RNG.uniform(-4, 4, 30)}
            _, u = propagate_schrodinger(model, fields, grid)
            drift = np.linalg.norm(u.conj().T @ u - np.eye(3))
            assert drift < 1e-9

    def test_grouped_runs_match_stepwise(self):
        # piecewise-constant fields: grouped exponentials equal the product
        # of the per-step trajectory
        model = QutritLadder(anharmonicity=-1.0)
        grid = TimeGrid(12.5, 30)
        cx = np.repeat(RNG.uniform(-0.5, 0.5, 5), 6)
        cy = np.repeat(RNG.uniform(-0.5, 0.5, 5), 6)
        psi0 = np.array([1.0, 0.0, 0.0], dtype=complex)
        psi, _ = propagate_schrodinger(model, {"cx": cx, "cy": cy}, grid, psi0)
        states = schrodinger_trajectory(model, {"cx": cx, "cy": cy}, grid, psi0)
        np.testing.assert_allclose(psi, states[-1], atol=1e-12)

    def test_halving_dt_leaves_fidelity(self):
        # zero-order-hold fields are exactly representable on the refined
        # grid, so the propagator is unchanged up to round-off
        model = SingleQubit(detuning=1.0)
        target = np.array([0.0, 1.0], dtype=complex)
        u_coarse = RNG.choice([-1.0, 0.0, 1.0], size=28)
        coarse = TimeGrid(np.pi * np.sqrt(2.0), 28)
        fine = TimeGrid(np.pi * np.sqrt(2.0), 56)
        psi_c, _ = propagate_schrodinger(model, {"u": u_coarse}, coarse,
                                         np.array([1.0, 0.0]))
        psi_f, _ = propagate_schrodinger(model, {"u": np.repeat(u_coarse, 2)},
                                         fine, np.array([1.0, 0.0]))
        fid_c = abs(np.vdot(target, psi_c)) ** 2
        fid_f = abs(np.vdot(target, psi_f)) ** 2
        assert abs(fid_c - fid_f) < 1e-4

    def test_trajectory_preserves_norm(self):
        model = BellTriplet()
        grid = TimeGrid(2.5, 30)
        fields = {"omega": RNG.uniform(-4, 4, 30), "delta": RNG.uniform(-4, 4, 30)}
        states = schrodinger_trajectory(model, fields, grid,
                                        np.array([1.0, 0.0, 0.0]))
        norms = np.linalg.norm(states, axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-9)


class TestLindblad:
    grid = TimeGrid(1.0, 30)

    def rho_level(self, level):
        rho = np.zeros((4, 4), dtype=complex)
        rho[level, level] = 1.0
        return rho

    def test_pure_decay(self):
        model = StirapLadder(decay_rate=5.0)
        fields = {"omega_p": np.zeros(30), "omega_s": np.zeros(30)}
        rho = propagate_lindblad(model, fields, self.grid, self.rho_level(1),
                                 n_sub=10)
        assert rho[1, 1].real == pytest.approx(np.exp(-5.0), abs=1e-8)
        assert rho[3, 3].real == pytest.approx(1.0 - np.exp(-5.0), abs=1e-8)

    def test_zero_decay_matches_unitary(self):
        model = StirapLadder(decay_rate=0.0)
        for _ in range(5):
            fields = {"omega_p": RNG.uniform(0, 20, 30),
                      "omega_s": RNG.uniform(0, 20, 30)}
            _, u = propagate_schrodinger(model, fields, self.grid)
            expected = u @ self.rho_level(0) @ u.conj().T
            rho = propagate_lindblad(model, fields, self.grid,
                                     self.rho_level(0), n_sub=100)
            assert np.abs(rho - expected).max() < 1e-8

    def test_trace_conserved_random_fields(self):
        model = StirapLadder(decay_rate=5.0)
        for _ in range(20):
            fields = {"omega_p": RNG.uniform(0, 20, 30),
                      "omega_s": RNG.uniform(0, 20, 30)}
            rho = propagate_lindblad(model, fields, self.grid,
                                     self.rho_level(0), n_sub=30)
            assert abs(np.trace(rho).real - 1.0) < 1e-6
            assert np.abs(rho - rho.conj().T).max() < 1e-9

    def test_substep_refinement_stable(self):
        model = StirapLadder(decay_rate=5.0)
        fields = {"omega_p": RNG.uniform(0, 20, 30),
                  "omega_s": RNG.uniform(0, 20, 30)}
        a = propagate_lindblad(model, fields, self.grid, self.rho_level(0),
                               n_sub=30)
        b = propagate_lindblad(model, fields, self.grid, self.rho_level(0),
                               n_sub=60)
        assert abs(a[2, 2].real - b[2, 2].real) < 1e-4

    def test_trace_blowup_raises(self):
        model = StirapLadder(decay_rate=5000.0)
        fields = {"omega_p": np.zeros(30), "omega_s": np.zeros(30)}
        with pytest.raises(IntegrationAccuracyError):
            propagate_lindblad(model, fields, self.grid, self.rho_level(1),
                               n_sub=1)

    def test_trajectory_diagonal_is_population(self):
        model = StirapLadder(decay_rate=5.0)
        fields = {"omega_p": np.full(30, 10.0), "omega_s": np.full(30, 10.0)}
        rhos = lindblad_trajectory(model, fields, self.grid, self.rho_level(0),
                                   n_sub=30)
        assert rhos.shape == (31, 4, 4)
        pops = np.real(np.einsum("tii->ti", rhos))
        np.testing.assert_allclose(pops.sum(axis=1), 1.0, atol=1e-6)
        assert np.all(pops > -1e-8)

    def test_model_validation(self):
        with pytest.raises(ValueError):
            StirapLadder(decay_rate=-1.0)
        with pytest.raises(ValueError):
            BellTriplet(coupling=0.0)

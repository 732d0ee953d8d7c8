import math
import warnings

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from conftest import random_density, random_hermitian_unit_trace
from sdqsim.dynamics import (
    SM1,
    SM2,
    SP1,
    SP2,
    SZ1,
    SZ2,
    DynamicsResult,
    TwoQubitParams,
    TwoQubitState,
    build_hamiltonian,
    build_liouvillian,
    concurrence,
    contrast_map,
    contrast_time_map,
    density,
    evolve,
    half_iswap_state,
    ideal_bell_superposition,
    ket,
    lindblad_rhs,
)
from sdqsim.errors import (
    NonPhysicalStateError,
    NonPositiveRateMatrixWarning,
    ValidationError,
)
from sdqsim.modes import ComplexCoupling
from sdqsim.tomography import BELL_STATES


def params(phase=0.0, gamma=0.0, gamma1=(0.0, 0.0), j=1.0, omega1=0.0, omega2=0.0):
    return TwoQubitParams(
        omega1=omega1,
        omega2=omega2,
        coupling=ComplexCoupling(j * math.cos(phase), j * math.sin(phase)),
        gamma1=gamma1,
        gamma_collective=gamma,
    )


def quiet_evolve(*args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonPositiveRateMatrixWarning)
        return evolve(*args, **kwargs)


class TestHamiltonian:
    def test_real_coupling_block(self):
        h = build_hamiltonian(params(phase=0.0, j=0.7))
        block = h[np.ix_([1, 2], [1, 2])]
        np.testing.assert_allclose(block, 0.7 * np.array([[0, 1], [1, 0]]), atol=1e-15)

    def test_hermitian_for_random_phases(self, rng):
        for _ in range(10):
            h = build_hamiltonian(params(phase=float(rng.uniform(-4, 4))))
            assert np.max(np.abs(h - h.conj().T)) <= 1e-15

    def test_single_excitation_eigenvalues_phase_independent(self):
        for phase in (0.0, 0.4, -1.1, math.pi / 2):
            h = build_hamiltonian(params(phase=phase, j=1.3))
            evals = np.linalg.eigvalsh(h[np.ix_([1, 2], [1, 2])])
            np.testing.assert_allclose(evals, [-1.3, 1.3], atol=1e-12)

    def test_excitation_number_block_structure(self):
        h = build_hamiltonian(params(phase=0.9, omega1=0.2, omega2=-0.1))
        for i in (0, 3):
            for j in (1, 2):
                assert h[i, j] == 0 and h[j, i] == 0
        assert h[0, 3] == 0 and h[3, 0] == 0


class TestLindbladRhs:
    def test_closed_system_is_pure_commutator(self, rng):
        p = params(phase=0.7)
        rho = random_density(rng)
        h = build_hamiltonian(p)
        np.testing.assert_allclose(
            lindblad_rhs(p, rho), -1j * (h @ rho - rho @ h), atol=1e-14
        )

    def test_trace_preserving(self, rng):
        p = params(phase=1.1, gamma=0.8, gamma1=(0.3, 0.2))
        for _ in range(5):
            drho = lindblad_rhs(p, random_density(rng))
            assert abs(np.trace(drho)) <= 1e-14

    def test_sigma_z_equation_of_motion_oracle(self, rng):
        # the generator's <sigma_z> derivative must equal the closed-form
        # expectation expression: -(gamma1+Gamma)(z1+1)
        # - 2i(J* <s+1 s-2> - J <s+2 s-1>) - Gamma(<s+1 s-2> + <s+2 s-1>)
        phase, gamma, gamma1 = 0.9, 0.7, (0.15, 0.25)
        p = params(phase=phase, gamma=gamma, gamma1=gamma1)
        j = math.cos(phase) + 1j * math.sin(phase)
        for _ in range(6):
            rho = random_hermitian_unit_trace(rng)
            lhs = np.trace(SZ1 @ lindblad_rhs(p, rho))
            z1 = np.trace(SZ1 @ rho)
            c12 = np.trace((SP1 @ SM2) @ rho)
            c21 = np.trace((SP2 @ SM1) @ rho)
            rhs = (
                -(gamma1[0] + gamma) * (z1 + 1.0)
                - 2j * (np.conj(j) * c12 - j * c21)
                - gamma * (c12 + c21)
            )
            assert abs(lhs - rhs) <= 1e-12

    def test_relaxation_reaches_ground_state(self):
        p = params(phase=0.0, gamma1=(0.5, 0.5))
        result = quiet_evolve(p, density("01"), t_final=40.0, n_times=3,
                              store_states=True)
        ground_fidelity = result.rho_at[-1][0, 0].real
        assert ground_fidelity >= 0.999

    def test_rate_table_warning(self, rng):
        p = params(phase=0.0, gamma=0.5, gamma1=(0.0, 0.0))
        with pytest.warns(NonPositiveRateMatrixWarning):
            build_liouvillian(p)


class TestEvolve:
    def test_swapped_initialization_symmetry_at_zero_phase(self):
        p = params(phase=0.0, gamma=0.5)
        a = quiet_evolve(p, density("01"), 6.0, n_times=301)
        b = quiet_evolve(p, density("10"), 6.0, n_times=301)
        np.testing.assert_allclose(a.n1, b.n2, atol=1e-9)
        np.testing.assert_allclose(a.n2, b.n1, atol=1e-9)
        np.testing.assert_allclose(a.concurrence, b.concurrence, atol=1e-9)

    def test_lossless_rabi_period(self):
        p = params(phase=0.3)
        r = evolve(p, density("01"), math.pi, n_times=201)
        np.testing.assert_allclose(r.n2, np.cos(r.times) ** 2, atol=1e-9)
        half = int(np.argmin(np.abs(r.times - math.pi / 2)))
        assert r.n1[half] == pytest.approx(1.0, abs=1e-9)
        assert r.n1[-1] == pytest.approx(0.0, abs=1e-9)

    def test_opposite_phases_mirror_under_label_exchange(self):
        pa = params(phase=math.pi / 2, gamma=0.5)
        pb = params(phase=-math.pi / 2, gamma=0.5)
        a = quiet_evolve(pa, density("01"), 4.0, n_times=201)
        b = quiet_evolve(pb, density("10"), 4.0, n_times=201)
        np.testing.assert_allclose(a.n1, b.n2, atol=1e-9)
        np.testing.assert_allclose(a.n2, b.n1, atol=1e-9)

    def test_trace_hermiticity_and_leakage_invariants(self, rng):
        p = params(phase=0.8, gamma=1.5)
        r = quiet_evolve(p, density("01"), 5.0, n_times=101, store_states=True)
        for rho in r.rho_at:
            assert abs(np.trace(rho).real - 1.0) <= 1e-9
            assert np.max(np.abs(rho - rho.conj().T)) <= 1e-10
            # no leakage into the double-excitation state
            assert abs(rho[3, 3]) <= 1e-10
        assert np.all(r.n1 >= -1e-9) and np.all(r.n1 <= 1 + 1e-9)
        assert np.all(r.concurrence >= 0.0) and np.all(r.concurrence <= 1 + 1e-9)

    def test_closed_system_conserves_energy(self):
        p = params(phase=0.6, omega1=0.3, omega2=0.3)
        r = evolve(p, density("01"), 5.0, n_times=101, store_states=True)
        h = build_hamiltonian(p)
        energies = [np.trace(h @ rho).real for rho in r.rho_at]
        assert max(energies) - min(energies) <= 1e-9

    def test_phase_gauge_two_pi(self):
        a = quiet_evolve(params(phase=0.4, gamma=0.3), density("01"), 3.0, n_times=61)
        b = quiet_evolve(
            params(phase=0.4 + 2 * math.pi, gamma=0.3), density("01"), 3.0, n_times=61
        )
        np.testing.assert_allclose(a.n1, b.n1, atol=1e-10)
        np.testing.assert_allclose(a.concurrence, b.concurrence, atol=1e-10)

    def test_matches_expectation_value_closure_oracle(self):
        # independent route: integrate the closed (z1, z2, <s+1 s-2>) system in
        # the single-excitation sector and compare sigma_z trajectories
        phase, gamma, gamma1 = math.pi / 3, 0.7, (0.05, 0.08)
        p = params(phase=phase, gamma=gamma, gamma1=gamma1)
        r = quiet_evolve(p, density("01"), 3.0, n_times=61)
        g1, g2 = gamma1[0] + gamma, gamma1[1] + gamma
        j = np.exp(1j * phase)

        def rhs(_t, y):
            z1, z2, cr, ci = y
            c = cr + 1j * ci
            dz1 = -g1 * (z1 + 1) + 4 * np.imag(np.conj(j) * c) - 2 * gamma * c.real
            dz2 = -g2 * (z2 + 1) - 4 * np.imag(np.conj(j) * c) - 2 * gamma * c.real
            dc = (
                0.5j * j * (z2 - z1)
                - 0.5 * (g1 + g2) * c
                - 0.5 * gamma * (1 + 0.5 * (z1 + z2))
            )
            return [dz1, dz2, dc.real, dc.imag]

        sol = solve_ivp(
            rhs, (0.0, 3.0), [-1.0, 1.0, 0.0, 0.0], t_eval=r.times,
            rtol=1e-12, atol=1e-14,
        )
        np.testing.assert_allclose(2 * r.n1 - 1, sol.y[0], atol=1e-8)
        np.testing.assert_allclose(2 * r.n2 - 1, sol.y[1], atol=1e-8)

    def test_invalid_initial_state_rejected(self):
        with pytest.raises(ValidationError):
            evolve(params(), np.eye(4, dtype=complex), 1.0)


class TestHalfIswap:
    @pytest.mark.parametrize("phase", [0.0, math.pi / 4, -math.pi / 4,
                                       math.pi / 2, -math.pi / 2])
    def test_lossless_target_states(self, phase):
        state = half_iswap_state(params(phase=phase), density("01"))
        target = ideal_bell_superposition(phase)
        fidelity = np.real(target.conj() @ state.rho @ target)
        assert fidelity >= 1.0 - 1e-8
        assert concurrence(state.rho) == pytest.approx(1.0, abs=1e-8)

    def test_positive_phase_builds_singlet(self):
        state = half_iswap_state(params(phase=math.pi / 2), density("01"))
        psi = BELL_STATES["psi_minus"]
        assert np.real(psi.conj() @ state.rho @ psi) >= 1.0 - 1e-8

    def test_negative_phase_builds_triplet(self):
        state = half_iswap_state(params(phase=-math.pi / 2), density("01"))
        psi = BELL_STATES["psi_plus"]
        assert np.real(psi.conj() @ state.rho @ psi) >= 1.0 - 1e-8


class TestConcurrence:
    def test_product_state_is_separable(self):
        assert concurrence(density("01")) == 0.0

    def test_bell_state_is_maximal(self):
        psi = BELL_STATES["psi_minus"]
        assert concurrence(np.outer(psi, psi.conj())) == pytest.approx(1.0, abs=1e-12)

    def test_werner_state_closed_form_and_eigensolver_oracle(self):
        psi = BELL_STATES["psi_minus"]
        for p_mix in (0.2, 0.5, 0.9):
            rho = p_mix * np.outer(psi, psi.conj()) + (1 - p_mix) * np.eye(4) / 4.0
            expected = max(0.0, (3 * p_mix - 1) / 2.0)
            assert concurrence(rho) == pytest.approx(expected, abs=1e-12)
            # brute-force spin-flip product eigensolve
            sy = np.array([[0, -1j], [1j, 0]])
            yy = np.kron(sy, sy)
            lams = np.sort(np.sqrt(np.abs(np.linalg.eigvals(rho @ yy @ rho.conj() @ yy).real)))[::-1]
            assert concurrence(rho) == pytest.approx(
                max(0.0, lams[0] - lams[1] - lams[2] - lams[3]), abs=1e-10
            )

    def test_random_states_bounded(self, rng):
        for _ in range(20):
            c = concurrence(random_density(rng))
            assert 0.0 <= c <= 1.0

    def test_nonphysical_state_rejected(self):
        rho = np.diag([0.8, 0.8, -0.3, -0.3]).astype(complex)
        with pytest.raises(NonPhysicalStateError):
            concurrence(rho)


class TestContrastMaps:
    def test_zero_phase_column_and_antisymmetry(self):
        phi = np.array([-math.pi / 2, -math.pi / 4, 0.0, math.pi / 4, math.pi / 2])
        gam = np.array([1.0, 2.0, 3.0])
        with pytest.warns(NonPositiveRateMatrixWarning):
            dc = contrast_map(params(), phi, gam, math.pi / 4)
        np.testing.assert_allclose(dc[2], 0.0, atol=1e-9)
        np.testing.assert_allclose(dc, -dc[::-1], atol=1e-9)
        row, col = np.unravel_index(np.argmax(np.abs(dc)), dc.shape)
        assert abs(phi[row]) == pytest.approx(math.pi / 2)
        assert gam[col] == pytest.approx(2.0)

    def test_parallel_matches_serial(self):
        phi = np.array([-math.pi / 2, 0.0, math.pi / 2])
        gam = np.array([0.5, 2.0])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonPositiveRateMatrixWarning)
            serial = contrast_map(params(), phi, gam, math.pi / 4)
            parallel = contrast_map(params(), phi, gam, math.pi / 4, max_workers=2)
        np.testing.assert_array_equal(serial, parallel)

    def test_time_map_zeros_at_time_zero(self):
        phi = np.array([-math.pi / 2, 0.7])
        t = np.array([0.0, 0.5, math.pi / 4])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonPositiveRateMatrixWarning)
            dc = contrast_time_map(params(gamma=1.0), phi, t)
        assert dc.shape == (2, 3)
        np.testing.assert_allclose(dc[:, 0], 0.0, atol=1e-12)

    def test_empty_grid_rejected(self):
        with pytest.raises(ValidationError):
            contrast_map(params(), np.array([]), np.array([1.0]), 0.5)


class TestStateValidation:
    def test_two_qubit_state_checks(self):
        with pytest.raises(ValidationError):
            TwoQubitState(np.eye(4, dtype=complex))  # trace 4
        with pytest.raises(ValidationError):
            TwoQubitState(np.diag([1.0, 0.0, 0.0, 0.0]) + 1e-6 * np.triu(np.ones((4, 4)), 1))

    def test_basis_helpers(self):
        assert np.argmax(np.abs(ket("10"))) == 2
        with pytest.raises(ValidationError):
            ket("02")
        rho = density("11")
        assert rho[3, 3] == 1.0

import math
import warnings

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.optimize import curve_fit

import sdqsim.spectroscopy as spect
from sdqsim.errors import (
    BistableRegionWarning,
    BothZeroWarning,
    ProbePumpRatioWarning,
    SingularSusceptibilityError,
    ValidationError,
    ZeroFrequencyError,
)
from sdqsim.spectroscopy import (
    BACKWARD,
    FORWARD,
    CircuitConfig,
    DriveConfig,
    PumpSteadyState,
    SpectrumTrace,
    classical_transmission,
    kinetic_inductance,
    linearized_spectrum,
    nonreciprocity_ratio,
    nonreciprocity_ratio_values,
    pump_steady_state,
    resonance_split,
    spectrum_trace,
)


def natural_circuit(**overrides):
    base = dict(
        l0=1.0,
        c_shunt=1.0,
        r_loss=0.002,
        z0=0.02,
        kappa1=5e-5,
        kappa2=5e-5,
        lambda_kerr=1e-7,
        i_applied=math.sqrt(0.036),
        ic_plus=1.5,
        ic_minus=1.0,
    )
    base.update(overrides)
    return CircuitConfig(**base)


def probe_drive(grid, eps_pump=1e-3, omega_pump=0.99, eps_probe=1e-5):
    return DriveConfig(
        eps_pump=eps_pump, omega_pump=omega_pump, eps_probe=eps_probe, probe_grid=grid
    )


class TestKineticInductance:
    def test_zero_current_gives_bare_inductance(self):
        cfg = natural_circuit(i_applied=0.0)
        assert kinetic_inductance(cfg, FORWARD) == cfg.l0
        assert kinetic_inductance(cfg, BACKWARD) == cfg.l0

    def test_reciprocal_currents_give_equal_inductance(self):
        cfg = natural_circuit(ic_plus=1.0, ic_minus=1.0, i_applied=0.3)
        assert kinetic_inductance(cfg, FORWARD) == kinetic_inductance(cfg, BACKWARD)

    def test_three_halves_ratio_identity(self):
        # L_- - L_+ = 5 l0 i_a^2 / (9 ic_-^2) when ic_+/ic_- = 3/2
        cfg = natural_circuit(ic_plus=1.5, ic_minus=1.0, i_applied=0.2)
        diff = kinetic_inductance(cfg, BACKWARD) - kinetic_inductance(cfg, FORWARD)
        assert diff == pytest.approx(
            5.0 * cfg.l0 * cfg.i_applied**2 / (9.0 * cfg.ic_minus**2), rel=1e-12
        )


class TestResonanceSplit:
    def test_reference_estimate_55_6_mhz(self):
        omega_r = 2 * math.pi * 5e9
        cfg = CircuitConfig(
            l0=1.0,
            c_shunt=1.0 / omega_r**2,
            r_loss=0.002,
            z0=0.02,
            kappa1=1.0,
            kappa2=1.0,
            lambda_kerr=0.0,
            i_applied=30e-9,
            ic_plus=225e-9,
            ic_minus=150e-9,
        )
        split_mhz = resonance_split(cfg) / (2 * math.pi) / 1e6
        assert split_mhz == pytest.approx(55.6, rel=0.02)

    def test_zero_cases(self):
        assert resonance_split(natural_circuit(i_applied=0.0)) == 0.0
        assert resonance_split(natural_circuit(ic_plus=1.0, ic_minus=1.0, i_applied=0.3)) == 0.0

    def test_antisymmetric_under_current_exchange(self):
        cfg = natural_circuit(ic_plus=1.4, ic_minus=0.9, i_applied=0.2)
        swapped = natural_circuit(ic_plus=0.9, ic_minus=1.4, i_applied=0.2)
        assert resonance_split(cfg) == pytest.approx(-resonance_split(swapped), abs=1e-18)


class TestClassicalTransmission:
    def test_open_circuit_limit(self):
        cfg = natural_circuit(r_loss=1e12)
        grid = np.linspace(0.8, 1.2, 11)
        assert np.max(np.abs(classical_transmission(cfg, FORWARD, grid))) < 1e-10

    def test_resonance_value(self):
        cfg = natural_circuit(i_applied=0.0)
        omega0 = 1.0 / math.sqrt(kinetic_inductance(cfg, FORWARD) * cfg.c_shunt)
        s = classical_transmission(cfg, FORWARD, np.array([omega0]))
        assert s[0] == pytest.approx(cfg.z0 / (cfg.z0 + cfg.r_loss), abs=1e-15)

    def test_lorentzian_fit_recovers_linewidth(self):
        # least-squares fit of |S|^2 around resonance against the Lorentzian
        # model a / ((w - w0)^2 + k^2); k must come back as (z0+r)/(2 L) to 1%
        cfg = natural_circuit(i_applied=0.0, z0=0.0016, r_loss=0.0004)
        l_dir = kinetic_inductance(cfg, FORWARD)
        kappa_expected = (cfg.z0 + cfg.r_loss) / (2.0 * l_dir)
        assert 1.0 / kappa_expected > 100  # quality factor regime of the check
        omega0 = 1.0 / math.sqrt(l_dir * cfg.c_shunt)
        grid = np.linspace(omega0 - 5 * kappa_expected, omega0 + 5 * kappa_expected, 801)
        power = np.abs(classical_transmission(cfg, FORWARD, grid)) ** 2

        def model(w, a, w0, k):
            return a / ((w - w0) ** 2 + k**2)

        popt, _ = curve_fit(
            model, grid, power,
            p0=[(cfg.z0 / (2 * l_dir)) ** 2 * 1.1, omega0 + kappa_expected / 3,
                kappa_expected * 1.2],
        )
        assert popt[2] == pytest.approx(kappa_expected, rel=0.01)
        assert popt[0] == pytest.approx((cfg.z0 / (2 * l_dir)) ** 2, rel=0.02)

    def test_peak_at_direction_dependent_resonance(self):
        cfg = natural_circuit(i_applied=0.4)
        grid = np.linspace(0.7, 1.2, 20001)
        for direction in (FORWARD, BACKWARD):
            omega0 = 1.0 / math.sqrt(kinetic_inductance(cfg, direction) * cfg.c_shunt)
            peak = grid[np.argmax(np.abs(classical_transmission(cfg, direction, grid)))]
            assert abs(peak - omega0) <= np.diff(grid)[0]

    def test_zero_frequency_rejected(self):
        with pytest.raises(ZeroFrequencyError):
            classical_transmission(natural_circuit(), FORWARD, np.array([0.0, 1.0]))


class TestPumpSteadyState:
    def test_no_pump_gives_vacuum(self):
        ss = pump_steady_state(natural_circuit(), probe_drive(np.array([1.0]), eps_pump=0.0), FORWARD)
        assert ss.alpha == 0.0 and ss.n_photon == 0.0 and not ss.bistable

    def test_linear_cavity_closed_form(self):
        cfg = natural_circuit(lambda_kerr=0.0, i_applied=0.0)
        drive = probe_drive(np.array([1.0]), eps_pump=2e-3, omega_pump=0.995)
        ss = pump_steady_state(cfg, drive, FORWARD)
        delta = 1.0 - drive.omega_pump
        expected = drive.eps_pump / (1j * delta + cfg.kappa / 2.0)
        assert ss.alpha == pytest.approx(expected, abs=1e-18)

    def test_root_matches_time_integration(self):
        # oracle: integrate the amplitude equation of motion to t = 50/kappa
        cfg = natural_circuit(kappa1=0.01, kappa2=0.01, lambda_kerr=0.05, i_applied=0.0)
        drive = probe_drive(np.array([1.0]), eps_pump=0.02, omega_pump=0.995)
        ss = pump_steady_state(cfg, drive, FORWARD)

        def rhs(_t, y):
            a = y[0] + 1j * y[1]
            da = (
                -1j * (ss.delta_eff + 0.5 * cfg.lambda_kerr * abs(a) ** 2
                       - 1j * cfg.kappa / 2) * a
                + drive.eps_pump
            )
            return [da.real, da.imag]

        sol = solve_ivp(rhs, (0.0, 50.0 / cfg.kappa), [0.0, 0.0], rtol=1e-12, atol=1e-14)
        alpha_ode = sol.y[0, -1] + 1j * sol.y[1, -1]
        assert abs(alpha_ode - ss.alpha) <= 1e-6

    def test_bistable_region_flagged_with_deterministic_branch(self):
        cfg = natural_circuit(kappa1=5e-4, kappa2=5e-4, lambda_kerr=1e-3, i_applied=0.0)
        drive = probe_drive(np.array([1.0]), eps_pump=2e-3, omega_pump=1.005)
        with pytest.warns(BistableRegionWarning):
            ss = pump_steady_state(cfg, drive, FORWARD)
        assert ss.bistable and len(ss.roots) == 3
        assert ss.n_photon == min(ss.roots)


class TestLinearizedSpectrum:
    def test_zero_split_gives_identical_directions(self):
        cfg = natural_circuit(i_applied=0.0)
        drive = probe_drive(np.linspace(0.8, 1.2, 801))
        fwd = linearized_spectrum(cfg, drive, FORWARD)
        bwd = linearized_spectrum(cfg, drive, BACKWARD)
        assert np.max(np.abs(fwd - bwd)) == 0.0

    def test_peak_separation_matches_configured_split(self):
        cfg = natural_circuit()
        drive = probe_drive(np.linspace(0.8, 1.2, 4001))
        fwd = linearized_spectrum(cfg, drive, FORWARD)
        bwd = linearized_spectrum(cfg, drive, BACKWARD)
        grid = drive.probe_grid
        sep = grid[np.argmax(np.abs(fwd))] - grid[np.argmax(np.abs(bwd))]
        assert sep == pytest.approx(resonance_split(cfg), abs=np.diff(grid)[0])

    def test_matches_analytic_lorentzian_without_kerr(self):
        cfg = natural_circuit(lambda_kerr=0.0)
        drive = probe_drive(np.linspace(0.8, 1.2, 2001), eps_pump=1e-3)
        for direction in (FORWARD, BACKWARD):
            s = linearized_spectrum(cfg, drive, direction)
            ss = pump_steady_state(cfg, drive, direction)
            big_omega = drive.probe_grid - drive.omega_pump
            analytic = (cfg.kappa1 * cfg.kappa2) / (
                (big_omega - ss.delta_eff) ** 2 + (cfg.kappa / 2.0) ** 2
            )
            np.testing.assert_allclose(np.abs(s) ** 2, analytic, rtol=1e-8)

    def test_zero_pump_scalar_limit_matches_classical_peak(self):
        # with no pump the 2x2 response collapses to the bare cavity; with the
        # port linewidths matched ((z0+r)/2L = kappa/2) the classical route
        # must agree in peak position (grid step) and normalized shape
        cfg = natural_circuit(i_applied=0.0, z0=6e-5, r_loss=4e-5)
        assert (cfg.z0 + cfg.r_loss) / (2 * cfg.l0) == pytest.approx(cfg.kappa / 2)
        grid = np.linspace(0.99, 1.01, 2001)
        drive = probe_drive(grid, eps_pump=0.0)
        s_quantum = linearized_spectrum(cfg, drive, FORWARD)
        s_classical = classical_transmission(cfg, FORWARD, grid)
        i_q = int(np.argmax(np.abs(s_quantum)))
        i_c = int(np.argmax(np.abs(s_classical)))
        assert abs(i_q - i_c) <= 1
        window = slice(i_q - 20, i_q + 21)
        nq = np.abs(s_quantum[window]) / np.abs(s_quantum[i_q])
        nc = np.abs(s_classical[window]) / np.abs(s_classical[i_c])
        np.testing.assert_allclose(nq, nc, atol=0.02)

    def test_split_magnitude_matches_classical_split(self):
        # small current keeps the linearized split within the dropped
        # quadratic corrections of the classical peak positions
        cfg = natural_circuit(i_applied=0.1)
        grid = np.linspace(0.9, 1.1, 40001)
        drive = probe_drive(grid, eps_pump=0.0)
        q_sep = grid[np.argmax(np.abs(linearized_spectrum(cfg, drive, FORWARD)))] - grid[
            np.argmax(np.abs(linearized_spectrum(cfg, drive, BACKWARD)))
        ]
        c_fwd = grid[np.argmax(np.abs(classical_transmission(cfg, FORWARD, grid)))]
        c_bwd = grid[np.argmax(np.abs(classical_transmission(cfg, BACKWARD, grid)))]
        assert q_sep == pytest.approx(c_fwd - c_bwd, rel=0.05)

    def test_singular_susceptibility_raises(self, monkeypatch):
        cfg = natural_circuit(i_applied=0.0)
        drive = probe_drive(np.array([0.99]), eps_pump=1e-3)

        def fake_steady(*_args, **_kwargs):
            return PumpSteadyState(
                alpha=0.0j,
                n_photon=0.0,
                delta_eff=0.0,
                lam=cfg.kappa / 2.0,
                roots=(0.0,),
                bistable=False,
            )

        monkeypatch.setattr(spect, "pump_steady_state", fake_steady)
        with pytest.raises(SingularSusceptibilityError):
            linearized_spectrum(cfg, drive, FORWARD)


class TestNonreciprocityRatio:
    def test_identical_traces_give_zero(self):
        s = np.ones(5) * (0.3 + 0.1j)
        ratio, mask = nonreciprocity_ratio_values(s, s)
        np.testing.assert_array_equal(ratio, np.zeros(5))
        assert not mask.any()

    def test_three_to_one_magnitude_ratio(self):
        ratio, _ = nonreciprocity_ratio_values(np.array([3.0]), np.array([1.0j]))
        assert ratio[0] == pytest.approx(0.5, abs=1e-15)

    def test_both_zero_flagged(self):
        with pytest.warns(BothZeroWarning):
            ratio, mask = nonreciprocity_ratio_values(
                np.array([0.0, 1.0]), np.array([0.0, 0.5])
            )
        assert ratio[0] == 0.0 and mask[0] and not mask[1]

    def test_bounded_by_one(self, rng):
        fwd = rng.normal(size=50) + 1j * rng.normal(size=50)
        bwd = rng.normal(size=50) + 1j * rng.normal(size=50)
        ratio, _ = nonreciprocity_ratio_values(fwd, bwd)
        assert np.all(np.abs(ratio) <= 1.0)

    def test_extrema_sit_at_shifted_resonances(self):
        cfg = natural_circuit()
        drive = probe_drive(np.linspace(0.8, 1.2, 4001))
        trace = spectrum_trace(cfg, drive)
        grid = drive.probe_grid
        step = np.diff(grid)[0]
        peak_fwd = grid[np.argmax(np.abs(trace.s_forward))]
        peak_bwd = grid[np.argmax(np.abs(trace.s_backward))]
        assert grid[np.argmax(trace.r_ratio)] == pytest.approx(peak_fwd, abs=step)
        assert grid[np.argmin(trace.r_ratio)] == pytest.approx(peak_bwd, abs=step)
        # asymmetry survives away from the peaks
        off = np.abs(grid - 1.0) > 0.05
        assert np.max(np.abs(trace.r_ratio[off])) > 1e-3


class TestTraceAssembly:
    def test_direction_labels_swap_exactly(self):
        cfg = natural_circuit()
        drive = probe_drive(np.linspace(0.9, 1.1, 201))
        trace = spectrum_trace(cfg, drive)
        fwd = linearized_spectrum(cfg, drive, FORWARD)
        bwd = linearized_spectrum(cfg, drive, BACKWARD)
        np.testing.assert_array_equal(trace.s_forward, fwd)
        np.testing.assert_array_equal(trace.s_backward, bwd)

    def test_classical_method_selected(self):
        cfg = natural_circuit()
        drive = probe_drive(np.linspace(0.9, 1.1, 201))
        trace = spectrum_trace(cfg, drive, method="classical")
        np.testing.assert_array_equal(
            trace.s_forward, classical_transmission(cfg, FORWARD, drive.probe_grid)
        )
        with pytest.raises(ValidationError):
            spectrum_trace(cfg, drive, method="nope")

    def test_trace_validation(self):
        with pytest.raises(ValidationError):
            SpectrumTrace(
                omega=np.array([1.0]),
                s_forward=np.array([1.0]),
                s_backward=np.array([1.0, 2.0]),
                r_ratio=np.array([0.0]),
            )


class TestDriveValidation:
    def test_probe_grid_must_increase(self):
        with pytest.raises(ValidationError):
            DriveConfig(1e-3, 0.99, 1e-5, probe_grid=np.array([1.0, 0.9]))

    def test_strong_probe_warns(self):
        with pytest.warns(ProbePumpRatioWarning):
            DriveConfig(1e-3, 0.99, 5e-4, probe_grid=np.array([1.0]))

    def test_inconsistent_omega_r_rejected(self):
        with pytest.raises(ValidationError):
            CircuitConfig(
                l0=1.0, c_shunt=1.0, r_loss=0.002, z0=0.02,
                kappa1=5e-5, kappa2=5e-5, lambda_kerr=0.0,
                i_applied=0.0, ic_plus=1.5, ic_minus=1.0, omega_r=1.1,
            )

    def test_applied_current_must_stay_subcritical(self):
        with pytest.raises(ValidationError):
            natural_circuit(i_applied=1.2)

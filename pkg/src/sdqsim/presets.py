"""Built-in run configurations reproducing the reference figure panels."""

from __future__ import annotations

import math

from .config import (
    CircuitSection,
    ContrastSection,
    DriveSection,
    GridSpec,
    QubitsSection,
    RunConfig,
    SquidSection,
    TomographyCase,
    TomographySection,
)
from .errors import ValidationError

__all__ = ["list_presets", "get_preset"]

PI = math.pi

# i_applied giving a forward/backward splitting of exactly 0.01 * omega_r
# (50 MHz at a 5 GHz anchor) for ic_plus/ic_minus = 3/2: solves
# 0.5 * x^2 * (1 - (2/3)^2) = 0.01 for x = i_applied/ic_minus.
_I_APPLIED_50MHZ = math.sqrt(0.036)

_SPLIT_CIRCUIT = dict(
    omega_r_ghz=5.0,
    l0=1.0,
    c_shunt=1.0,
    r_loss=0.002,
    z0=0.02,
    kappa1_ratio=5e-5,
    kappa2_ratio=5e-5,
    kerr_ratio=1e-7,
    ic_plus=1.5,
    ic_minus=1.0,
)

_PUMP_PROBE = DriveSection(
    pump_ratio=0.99,
    eps_pump_ratio=1e-3,
    eps_probe_ratio=1e-5,
    probe_min_ratio=0.8,
    probe_max_ratio=1.2,
    probe_points=4001,
    method="quantum",
)


def _spectroscopy(i_applied: float) -> RunConfig:
    return RunConfig(
        experiment="spectroscopy",
        circuit=CircuitSection(i_applied=i_applied, **_SPLIT_CIRCUIT),
        drive=_PUMP_PROBE,
    )


def _dynamics(initial: str) -> RunConfig:
    return RunConfig(
        experiment="dynamics",
        qubits=QubitsSection(
            j_magnitude=1.0,
            phases=(-PI / 2.0, 0.0, PI / 2.0),
            gamma1=(0.0, 0.0),
            gamma_collective=0.5,
            initial=initial,
            t_final=8.0,
            n_times=401,
        ),
    )


def _fig4() -> RunConfig:
    cases = (
        TomographyCase(label="a_phi_p90_lossless", phase=PI / 2.0, gamma_collective=0.0),
        TomographyCase(label="b_phi_m90_lossless", phase=-PI / 2.0, gamma_collective=0.0),
        TomographyCase(label="c_phi_p45_lossless", phase=PI / 4.0, gamma_collective=0.0),
        TomographyCase(label="d_phi_m45_lossless", phase=-PI / 4.0, gamma_collective=0.0),
        TomographyCase(label="e_phi_p90_crossdecay", phase=PI / 2.0, gamma_collective=1.0),
        TomographyCase(label="f_phi_m90_crossdecay", phase=-PI / 2.0, gamma_collective=1.0),
    )
    return RunConfig(
        experiment="tomography",
        qubits=QubitsSection(j_magnitude=1.0, phases=(0.0,), initial="01"),
        tomography=TomographySection(shots=0, cases=cases),
    )


_PRESETS = {
    # Pump-probe spectra, no splitting: forward and backward traces coincide.
    "fig2a": lambda: _spectroscopy(i_applied=0.0),
    # Pump-probe spectra with a 50 MHz forward/backward splitting at 5 GHz.
    "fig2b": lambda: _spectroscopy(i_applied=_I_APPLIED_50MHZ),
    # Nonreciprocity ratio for the fig2b parameters (same trace, R column).
    "fig2c": lambda: _spectroscopy(i_applied=_I_APPLIED_50MHZ),
    # Cubic coefficient map over (bias flux, tau1) at tau2 = 0.8.
    "fig2d": lambda: RunConfig(
        experiment="diode-char",
        squid=SquidSection(
            tau1=0.9,
            tau2=0.8,
            phi_b_grid=GridSpec(-PI, PI, 41),
            tau1_grid=GridSpec(0.05, 0.95, 41),
        ),
    ),
    # Populations for phases {-pi/2, 0, pi/2}, qubit 2 initially excited.
    "fig3ab": lambda: _dynamics("01"),
    # Same with the initialization reversed.
    "fig3cd": lambda: _dynamics("10"),
    # Concurrence traces for both initializations.
    "fig3ef": lambda: _dynamics("both"),
    # Entanglement-transfer contrast over (phase, cross-decay) at t = pi/4J.
    "fig3g": lambda: RunConfig(
        experiment="contrast-map",
        qubits=QubitsSection(j_magnitude=1.0, phases=(0.0,), gamma_collective=0.5),
        contrast=ContrastSection(
            mode="phi-gamma",
            phi_grid=GridSpec(-PI, PI, 41),
            gamma_grid=GridSpec(0.0, 4.0, 41),
            t_eval=PI / 4.0,
        ),
    ),
    # Contrast over (phase, time) at fixed cross-decay Gamma = J.
    "fig3h": lambda: RunConfig(
        experiment="contrast-map",
        qubits=QubitsSection(j_magnitude=1.0, phases=(0.0,), gamma_collective=1.0),
        contrast=ContrastSection(
            mode="phi-time",
            phi_grid=GridSpec(-PI, PI, 41),
            t_grid=GridSpec(0.0, 2.0, 41),
        ),
    ),
    # Half-iSWAP tomography: four lossless phases plus two cross-decay cases.
    "fig4": _fig4,
}


def list_presets() -> list[str]:
    """Names of the built-in figure-reproduction presets."""
    return sorted(_PRESETS)


def get_preset(name: str) -> RunConfig:
    """Expand a preset name into a fully validated run configuration."""
    if name not in _PRESETS:
        raise ValidationError(
            f"unknown preset {name!r}; available: {', '.join(list_presets())}"
        )
    return _PRESETS[name]()

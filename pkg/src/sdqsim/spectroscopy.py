"""Forward/backward transmission spectra of the diode resonator.

Two routes are exposed: a classical two-port input-output expression through
the direction-dependent kinetic inductance, and a quantum pump-probe route
that linearizes the driven Kerr cavity around its pump steady state and reads
transmission off the 2x2 fluctuation susceptibility. Both produce a
:class:`SpectrumTrace` carrying S21, S12 and the per-frequency
nonreciprocity ratio R = (|S21| - |S12|)/(|S21| + |S12|).

Conventions: the direction-dependent resonance sits at omega_r +/- delta/2
(symmetric split, ``forward`` on the + side); the probe response peaks at
detuning Omega = Delta_eff from the pump.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BistableRegionWarning,
    BothZeroWarning,
    ProbePumpRatioWarning,
    SingularSusceptibilityError,
    ValidationError,
    ZeroFrequencyError,
)

__all__ = [
    "FORWARD",
    "BACKWARD",
    "DIRECTIONS",
    "CircuitConfig",
    "DriveConfig",
    "SpectrumTrace",
    "PumpSteadyState",
    "kinetic_inductance",
    "resonance_split",
    "classical_transmission",
    "pump_steady_state",
    "linearized_spectrum",
    "nonreciprocity_ratio",
    "nonreciprocity_ratio_values",
    "spectrum_trace",
]

FORWARD = "forward"
BACKWARD = "backward"
DIRECTIONS = (FORWARD, BACKWARD)


def _check_direction(direction: str) -> str:
    if direction not in DIRECTIONS:
        raise ValidationError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    return direction


@dataclass(frozen=True)
class CircuitConfig:
    """Lumped-element and drive-coupling parameters of the diode resonator.

    Natural units are fine: only ratios enter the physics. ``omega_r`` may be
    given explicitly (checked against 1/sqrt(l0*c_shunt)) or left to default.
    """

    l0: float
    c_shunt: float
    r_loss: float
    z0: float
    kappa1: float
    kappa2: float
    lambda_kerr: float
    i_applied: float
    ic_plus: float
    ic_minus: float
    omega_r: float = None  # type: ignore[assignment]

    def __post_init__(self):
        for name in ("l0", "c_shunt", "r_loss", "z0", "kappa1", "kappa2"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ValidationError(f"{name} must be positive, got {value}")
        if self.ic_plus <= 0.0 or self.ic_minus <= 0.0:
            raise ValidationError(
                f"critical currents must be positive, got ({self.ic_plus}, {self.ic_minus})"
            )
        if self.i_applied < 0.0:
            raise ValidationError(f"i_applied must be >= 0, got {self.i_applied}")
        if not self.i_applied < min(self.ic_plus, self.ic_minus):
            raise ValidationError(
                "i_applied must stay below both critical currents, got "
                f"{self.i_applied} vs ({self.ic_plus}, {self.ic_minus})"
            )
        natural = 1.0 / np.sqrt(self.l0 * self.c_shunt)
        if self.omega_r is None:
            object.__setattr__(self, "omega_r", natural)
        elif abs(self.omega_r - natural) > 1e-12 * natural:
            raise ValidationError(
                f"omega_r={self.omega_r} inconsistent with 1/sqrt(l0*c_shunt)={natural}"
            )

    @property
    def kappa(self) -> float:
        return self.kappa1 + self.kappa2


@dataclass(frozen=True)
class DriveConfig:
    """Pump and probe tones: amplitudes, pump frequency, and the probe grid."""

    eps_pump: float
    omega_pump: float
    eps_probe: float
    probe_grid: np.ndarray = field(repr=False)

    def __post_init__(self):
        grid = np.asarray(self.probe_grid, dtype=float)
        object.__setattr__(self, "probe_grid", grid)
        if grid.size == 0:
            raise ValidationError("probe_grid must not be empty")
        if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
            raise ValidationError("probe_grid must be strictly increasing")
        if self.eps_pump < 0.0 or self.eps_probe < 0.0:
            raise ValidationError("drive amplitudes must be >= 0")
        if self.eps_pump > 0.0 and self.eps_probe / self.eps_pump > 0.1:
            warnings.warn(
                ProbePumpRatioWarning(
                    f"probe/pump amplitude ratio {self.eps_probe / self.eps_pump:.3g} "
                    "exceeds 0.1; the linearized treatment assumes a weak probe"
                )
            )


@dataclass(frozen=True)
class SpectrumTrace:
    """Aligned forward/backward complex transmission and the asymmetry ratio."""

    omega: np.ndarray
    s_forward: np.ndarray
    s_backward: np.ndarray
    r_ratio: np.ndarray
    both_zero: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        n = len(self.omega)
        if not (len(self.s_forward) == len(self.s_backward) == len(self.r_ratio) == n):
            raise ValidationError("trace arrays must have equal length")
        if np.any(np.abs(self.r_ratio) > 1.0 + 1e-12):
            raise ValidationError("|r_ratio| must not exceed 1")
        if self.both_zero is None:
            object.__setattr__(self, "both_zero", np.zeros(n, dtype=bool))


@dataclass(frozen=True)
class PumpSteadyState:
    """Steady pump amplitude plus diagnostics of the cubic photon-number solve."""

    alpha: complex
    n_photon: float
    delta_eff: float
    lam: float
    roots: tuple[float, ...]
    bistable: bool


def kinetic_inductance(cfg: CircuitConfig, direction: str) -> float:
    """Direction-dependent kinetic inductance l0*(1 + (i_applied/ic_dir)^2)."""
    _check_direction(direction)
    ic = cfg.ic_plus if direction == FORWARD else cfg.ic_minus
    return cfg.l0 * (1.0 + (cfg.i_applied / ic) ** 2)


def resonance_split(cfg: CircuitConfig) -> float:
    """Forward-backward resonance splitting from the inductance asymmetry.

    Positive when ic_plus > ic_minus (the forward resonance sits higher);
    antisymmetric under exchanging the two critical currents.
    """
    x_minus = (cfg.i_applied / cfg.ic_minus) ** 2
    x_plus = (cfg.i_applied / cfg.ic_plus) ** 2
    return 0.5 * cfg.omega_r * (x_minus - x_plus)


def classical_transmission(
    cfg: CircuitConfig, direction: str, omega_grid
) -> np.ndarray:
    """Two-port series-RLC transmission z0 / (z0 + r + i(w*L_dir - 1/(w*C)))."""
    _check_direction(direction)
    omega = np.asarray(omega_grid, dtype=float)
    if np.any(omega == 0.0):
        raise ZeroFrequencyError("transmission undefined at zero frequency")
    l_dir = kinetic_inductance(cfg, direction)
    impedance = cfg.r_loss + 1j * (omega * l_dir - 1.0 / (omega * cfg.c_shunt))
    return cfg.z0 / (cfg.z0 + impedance)


def _delta_eff(cfg: CircuitConfig, drive: DriveConfig, direction: str) -> float:
    delta = cfg.omega_r - drive.omega_pump
    shift = 0.5 * resonance_split(cfg)
    return delta + (shift if direction == FORWARD else -shift)


def pump_steady_state(
    cfg: CircuitConfig, drive: DriveConfig, direction: str
) -> PumpSteadyState:
    """Steady-state pump amplitude of the driven Kerr cavity.

    The photon number solves |eps|^2 = n * [(Delta_eff + Lambda*n/2)^2 +
    kappa^2/4]; the returned root is the one continuously connected to n -> 0
    as the drive is switched off (the low-amplitude branch). Three positive
    roots raise a :class:`BistableRegionWarning` and set ``bistable``; the
    branch choice stays deterministic.
    """
    _check_direction(direction)
    delta_eff = _delta_eff(cfg, drive, direction)
    kappa = cfg.kappa
    lam_kerr = cfg.lambda_kerr
    power = drive.eps_pump**2

    if power == 0.0:
        return PumpSteadyState(0.0 + 0.0j, 0.0, delta_eff, 0.0, (0.0,), False)

    base = delta_eff**2 + kappa**2 / 4.0
    if lam_kerr == 0.0:
        positive = [power / base]
    else:
        coeffs = [lam_kerr**2 / 4.0, lam_kerr * delta_eff, base, -power]
        roots = np.roots(coeffs)
        positive = sorted(
            float(r.real)
            for r in roots
            if abs(r.imag) < 1e-9 * max(1.0, abs(r.real)) and r.real > 0.0
        )
        if not positive:
            positive = [power / base]
    bistable = len(positive) == 3
    if bistable:
        warnings.warn(
            BistableRegionWarning(
                "pump steady state is bistable; returning the low-amplitude branch"
            )
        )
    n = positive[0]
    alpha = drive.eps_pump / (kappa / 2.0 + 1j * (delta_eff + lam_kerr * n / 2.0))
    return PumpSteadyState(
        alpha=complex(alpha),
        n_photon=n,
        delta_eff=delta_eff,
        lam=lam_kerr * n,
        roots=tuple(positive),
        bistable=bistable,
    )


def linearized_spectrum(
    cfg: CircuitConfig,
    drive: DriveConfig,
    direction: str,
    include_idler: bool = False,
    idler_ratio: complex = 1.0,
) -> np.ndarray:
    """Probe transmission from the linearized pump-probe susceptibility.

    For each probe detuning Omega = omega_probe - omega_pump the 2x2
    fluctuation matrix is inverted in closed form; transmission is
    -sqrt(kappa1*kappa2) * chi_11 (plus the idler term chi_12 scaled by the
    input-sideband ratio when ``include_idler``). With zero Kerr the result
    is a single Lorentzian of half-width kappa/2 centered at Delta_eff.
    """
    _check_direction(direction)
    steady = pump_steady_state(cfg, drive, direction)
    delta_eff = steady.delta_eff
    lam = steady.lam
    kappa = cfg.kappa
    omega = np.asarray(drive.probe_grid, dtype=float)
    big_omega = omega - drive.omega_pump

    det = (kappa / 2.0 - 1j * big_omega) ** 2 + delta_eff**2 - lam**2
    small = np.abs(det) < 1e-30
    if np.any(small):
        raise SingularSusceptibilityError(
            "susceptibility singular at "
            f"{int(np.count_nonzero(small))} grid point(s); "
            "parametric instability threshold crossed"
        )
    chi11 = (kappa / 2.0 - 1j * (delta_eff + big_omega)) / det
    s = -np.sqrt(cfg.kappa1 * cfg.kappa2) * chi11
    if include_idler:
        chi12 = -1j * lam / det
        s = s - np.sqrt(cfg.kappa1 * cfg.kappa2) * chi12 * idler_ratio
    return s


def nonreciprocity_ratio_values(
    s_forward, s_backward
) -> tuple[np.ndarray, np.ndarray]:
    """Per-point ratio (|S+|-|S-|)/(|S+|+|S-|) and a mask of degenerate zeros.

    Points where both magnitudes fall below 1e-30 emit 0 with the mask set
    (and a :class:`BothZeroWarning`).
    """
    fwd = np.abs(np.asarray(s_forward))
    bwd = np.abs(np.asarray(s_backward))
    total = fwd + bwd
    both_zero = total < 1e-30
    if np.any(both_zero):
        warnings.warn(
            BothZeroWarning(
                f"both transmissions vanish at {int(np.count_nonzero(both_zero))} point(s)"
            )
        )
    safe_total = np.where(both_zero, 1.0, total)
    ratio = np.where(both_zero, 0.0, (fwd - bwd) / safe_total)
    return ratio, both_zero


def nonreciprocity_ratio(trace: SpectrumTrace) -> np.ndarray:
    """Asymmetry ratio recomputed from a trace's complex columns."""
    ratio, _ = nonreciprocity_ratio_values(trace.s_forward, trace.s_backward)
    return ratio


def spectrum_trace(
    cfg: CircuitConfig,
    drive: DriveConfig,
    method: str = "quantum",
    include_idler: bool = False,
) -> SpectrumTrace:
    """Full two-direction trace via the chosen route ('quantum' or 'classical')."""
    omega = np.asarray(drive.probe_grid, dtype=float)
    if method == "quantum":
        s_fwd = linearized_spectrum(cfg, drive, FORWARD, include_idler=include_idler)
        s_bwd = linearized_spectrum(cfg, drive, BACKWARD, include_idler=include_idler)
    elif method == "classical":
        s_fwd = classical_transmission(cfg, FORWARD, omega)
        s_bwd = classical_transmission(cfg, BACKWARD, omega)
    else:
        raise ValidationError(f"method must be 'quantum' or 'classical', got {method!r}")
    ratio, both_zero = nonreciprocity_ratio_values(s_fwd, s_bwd)
    return SpectrumTrace(
        omega=omega,
        s_forward=s_fwd,
        s_backward=s_bwd,
        r_ratio=ratio,
        both_zero=both_zero,
    )

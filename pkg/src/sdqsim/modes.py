"""Resonator mode pairs and the complex qubit-qubit coupling they mediate.

Counter-propagating mode pairs carry amplitudes (u_plus, u_minus) that become
unequal when time-reversal symmetry is broken. The resulting splitting between
the forward and backward mode frequencies feeds a causal Green's-function sum
between the two ports, producing an exchange coupling J = |J| e^{i phase}
whose phase flips sign under port exchange and under bias reversal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyModeSetError, ValidationError

__all__ = [
    "ModePair",
    "ModeSet",
    "AsymmetryModel",
    "ComplexCoupling",
    "mode_asymmetry",
    "mode_amplitudes",
    "build_single_mode_set",
    "direction_shift",
    "mode_mixing_matrix",
    "qubit_coupling",
]


@dataclass(frozen=True)
class ModePair:
    """One +k/-k pair: wavenumber, shared frequency, branch amplitudes.

    ``omega_minus`` lets the backward branch start from a different bare
    frequency (defaults to degenerate with ``omega_k``).
    """

    k: float
    omega_k: float
    u_plus: complex
    u_minus: complex
    omega_minus: float | None = None

    def __post_init__(self):
        if not self.omega_k > 0.0:
            raise ValidationError(f"omega_k must be positive, got {self.omega_k}")
        if self.omega_minus is not None and not self.omega_minus > 0.0:
            raise ValidationError(
                f"omega_minus must be positive, got {self.omega_minus}"
            )
        norm = abs(self.u_plus) ** 2 + abs(self.u_minus) ** 2
        if abs(norm - 1.0) > 1e-9:
            raise ValidationError(
                f"|u_plus|^2 + |u_minus|^2 must be 1, got {norm}"
            )

    @property
    def omega_backward(self) -> float:
        return self.omega_k if self.omega_minus is None else self.omega_minus


@dataclass(frozen=True)
class ModeSet:
    """Modes between the ports plus the shared decay rate and zero-point flux."""

    modes: tuple[ModePair, ...]
    kappa: float
    phi_zpf: float

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if not self.kappa > 0.0:
            raise ValidationError(f"kappa must be positive, got {self.kappa}")
        if not self.phi_zpf > 0.0:
            raise ValidationError(f"phi_zpf must be positive, got {self.phi_zpf}")


@dataclass(frozen=True)
class AsymmetryModel:
    """Saturating parametrization of the bias-induced mode asymmetry.

    ``zeta0`` is the saturated asymmetry, ``phi_s`` the flux scale at which
    saturation sets in. The functional form is a declared model choice: odd in
    the bias, bounded by |zeta0|, vanishing at zero bias.
    """

    zeta0: float
    phi_s: float

    def __post_init__(self):
        if not abs(self.zeta0) < 1.0:
            raise ValidationError(f"|zeta0| must be < 1, got {self.zeta0}")
        if not self.phi_s > 0.0:
            raise ValidationError(f"phi_s must be positive, got {self.phi_s}")


@dataclass(frozen=True)
class ComplexCoupling:
    """Exchange coupling split into reciprocal and nonreciprocal parts."""

    j_r: float
    j_nr: float

    @property
    def magnitude(self) -> float:
        return math.hypot(self.j_r, self.j_nr)

    @property
    def phase(self) -> float:
        return math.atan2(self.j_nr, self.j_r)


def mode_asymmetry(model: AsymmetryModel, phi_b: float) -> float:
    """Dimensionless amplitude asymmetry zeta at bias ``phi_b``; odd, |zeta| < 1."""
    return model.zeta0 * np.sign(phi_b) * np.tanh(abs(phi_b) / model.phi_s)


def mode_amplitudes(zeta: float) -> tuple[float, float]:
    """Normalized branch amplitudes (u_plus, u_minus) for a given asymmetry."""
    if not abs(zeta) < 1.0:
        raise ValidationError(f"|zeta| must be < 1, got {zeta}")
    return math.sqrt((1.0 + zeta) / 2.0), math.sqrt((1.0 - zeta) / 2.0)


def build_single_mode_set(
    omega_k: float,
    kappa: float,
    phi_zpf: float,
    zeta: float,
    x1: float,
    x2: float,
) -> ModeSet:
    """Single mode pair with the wavenumber tuned so k*(x2-x1) = pi/2.

    This maximizes the nonreciprocal weight sin(k*(x2-x1)) for qubits at the
    two ports.
    """
    if x1 == x2:
        raise ValidationError("port positions must differ")
    k = math.pi / (2.0 * (x2 - x1))
    u_plus, u_minus = mode_amplitudes(zeta)
    return ModeSet(
        modes=(ModePair(k=k, omega_k=omega_k, u_plus=u_plus, u_minus=u_minus),),
        kappa=kappa,
        phi_zpf=phi_zpf,
    )


def _bilinear_prefactor(c3: float, phi_b: float, modes: ModeSet) -> float:
    # Mean-field constant proportional to the bias, absorbed prefactors = 1.
    return 0.5 * phi_b * c3 * modes.phi_zpf**3


def direction_shift(
    c3: float, phi_b: float, modes: ModeSet, mode_index: int = 0
) -> float:
    """Forward/backward frequency splitting of one mode pair.

    Proportional to bias * c3 * phi_zpf^3 * (|u_plus|^2 - |u_minus|^2); odd
    under bias reversal because c3 and the amplitude asymmetry are both odd.
    """
    if not modes.modes:
        raise EmptyModeSetError("mode set has no modes")
    m = modes.modes[mode_index]
    weight = abs(m.u_plus) ** 2 - abs(m.u_minus) ** 2
    return _bilinear_prefactor(c3, phi_b, modes) * weight


def mode_mixing_matrix(
    c3: float, phi_b: float, modes: ModeSet, mode_index: int = 0
) -> np.ndarray:
    """2x2 bilinear Hamiltonian of one +k/-k pair including the cubic term.

    Diagonal entries shift the branch frequencies (their gap equals
    :func:`direction_shift` when the bare branches are degenerate); the
    off-diagonal mixing is Hermitian by construction and only enters
    frequencies at second order in the cubic strength.
    """
    if not modes.modes:
        raise EmptyModeSetError("mode set has no modes")
    m = modes.modes[mode_index]
    x = _bilinear_prefactor(c3, phi_b, modes)
    amps = np.array([m.u_plus, m.u_minus], dtype=complex)
    lam = x * np.outer(amps, amps.conj())
    return np.diag([m.omega_k, m.omega_backward]).astype(complex) + lam


def qubit_coupling(
    g: float,
    omega: float,
    x1: float,
    x2: float,
    modes: ModeSet,
    delta_omega: float,
) -> ComplexCoupling:
    """Complex qubit-qubit coupling from the causal Green's function.

    The reciprocal part sums the port-symmetric branch combination
    cos(k*(x2-x1)) through each mode's susceptibility 1/((omega-omega_k)+i*kappa);
    the nonreciprocal part is g^2 * delta_omega * sum_k |chi_k|^2 sin(k*(x2-x1)),
    exactly odd under port exchange and linear in the splitting.
    """
    if not modes.modes:
        raise EmptyModeSetError("mode set has no modes")
    if x1 == x2:
        raise ValidationError("port positions must differ")
    if not g > 0.0:
        raise ValidationError(f"coupling rate g must be positive, got {g}")
    d = x2 - x1
    j_r = 0.0
    j_nr = 0.0
    for m in modes.modes:
        chi = 1.0 / ((omega - m.omega_k) + 1j * modes.kappa)
        weight = abs(m.u_plus) ** 2 + abs(m.u_minus) ** 2
        j_r += weight * math.cos(m.k * d) * chi.real
        j_nr += abs(chi) ** 2 * math.sin(m.k * d) * delta_omega
    return ComplexCoupling(j_r=g**2 * j_r, j_nr=g**2 * j_nr)

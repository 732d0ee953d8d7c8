"""Two-qubit state tomography: 16-setting Pauli measurements and linear
reconstruction, scored against the Bell states.

Exact mode reads expectations directly off the density matrix; sampled mode
draws +-1 outcomes from each setting's eigenprojector probabilities with a
seeded generator. Reconstruction is the plain Pauli sum
rho = (1/4) sum_ab <a x b> (sigma_a x sigma_b); no maximum-likelihood or
positivity projection is applied, so sampled reconstructions may be slightly
non-positive and are flagged rather than repaired.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import IncompleteRecordError, ValidationError

__all__ = [
    "PAULI",
    "BELL_STATES",
    "SETTINGS",
    "TomographyRecord",
    "ReconstructionResult",
    "measure_expectations",
    "linear_reconstruct",
    "bell_fidelity",
    "density_matrix_report",
]

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

SETTINGS = tuple(itertools.product("IXYZ", repeat=2))

_SQRT_HALF = 1.0 / np.sqrt(2.0)
BELL_STATES = {
    "psi_plus": np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) * _SQRT_HALF,
    "psi_minus": np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) * _SQRT_HALF,
    "phi_plus": np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) * _SQRT_HALF,
    "phi_minus": np.array([1.0, 0.0, 0.0, -1.0], dtype=complex) * _SQRT_HALF,
}


def _setting_operator(a: str, b: str) -> np.ndarray:
    return np.kron(PAULI[a], PAULI[b])


@dataclass(frozen=True)
class TomographyRecord:
    """Measured expectation per (a, b) setting; shots=0 marks exact data."""

    expectations: dict[tuple[str, str], float]
    shots: int = 0

    def __post_init__(self):
        object.__setattr__(self, "expectations", dict(self.expectations))
        for key, value in self.expectations.items():
            if abs(value) > 1.0 + 1e-12:
                raise ValidationError(f"expectation {key} out of [-1, 1]: {value}")
        if self.shots == 0 and ("I", "I") in self.expectations:
            if self.expectations[("I", "I")] != 1.0:
                raise ValidationError("exact (I, I) expectation must be 1")


@dataclass(frozen=True)
class ReconstructionResult:
    """Reconstructed matrix, Bell fidelities, and a positivity flag."""

    rho_est: np.ndarray = field(repr=False)
    fidelity_targets: dict[str, float] = field(default_factory=dict)
    physical: bool = True


def measure_expectations(rho: np.ndarray, shots: int = 0, seed=None) -> TomographyRecord:
    """All 16 two-qubit Pauli expectations of ``rho``.

    With ``shots`` > 0 each setting is measured independently: +-1 outcomes
    are drawn binomially from the eigenprojector probability of the +1
    subspace. ``seed`` feeds a fresh generator (or pass a Generator directly)
    so repeated runs are reproducible.
    """
    rho = np.asarray(rho, dtype=complex)
    if shots < 0:
        raise ValidationError(f"shots must be >= 0, got {shots}")
    rng = None
    if shots > 0:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    expectations: dict[tuple[str, str], float] = {}
    for a, b in SETTINGS:
        op = _setting_operator(a, b)
        exact = float(np.trace(rho @ op).real)
        if shots == 0:
            expectations[(a, b)] = min(1.0, max(-1.0, exact))
            continue
        evals, vecs = np.linalg.eigh(op)
        plus = vecs[:, evals > 0.0]
        p_plus = float(np.einsum("ij,ji->", plus.conj().T @ rho, plus).real)
        p_plus = min(1.0, max(0.0, p_plus))
        n_plus = int(rng.binomial(shots, p_plus))
        expectations[(a, b)] = 2.0 * n_plus / shots - 1.0
    if shots == 0:
        expectations[("I", "I")] = 1.0
    return TomographyRecord(expectations=expectations, shots=shots)


def linear_reconstruct(record: TomographyRecord) -> ReconstructionResult:
    """Invert the Pauli expansion: rho = (1/4) sum <a x b> (sigma_a x sigma_b).

    Exact records round-trip to machine precision because the 16 settings form
    an orthogonal operator basis. The result is Hermitian with unit trace by
    construction; positivity is only checked, not enforced.
    """
    missing = [s for s in SETTINGS if s not in record.expectations]
    if missing:
        raise IncompleteRecordError(f"missing basis settings: {missing}")
    rho = np.zeros((4, 4), dtype=complex)
    for a, b in SETTINGS:
        rho += record.expectations[(a, b)] * _setting_operator(a, b)
    rho /= 4.0
    eigs = np.linalg.eigvalsh(rho)
    physical = bool(eigs.min() >= -1e-8)
    fidelities = {
        name: bell_fidelity(rho, name) for name in BELL_STATES
    }
    return ReconstructionResult(
        rho_est=rho, fidelity_targets=fidelities, physical=physical
    )


def bell_fidelity(rho_est: np.ndarray, target: str) -> float:
    """Overlap <psi|rho|psi> with the named Bell state, clipped to [0, 1]."""
    if target not in BELL_STATES:
        raise ValidationError(
            f"unknown Bell label {target!r}; expected one of {sorted(BELL_STATES)}"
        )
    psi = BELL_STATES[target]
    value = float(np.real(psi.conj() @ np.asarray(rho_est, dtype=complex) @ psi))
    return min(1.0, max(0.0, value))


def density_matrix_report(result: ReconstructionResult) -> tuple[np.ndarray, np.ndarray]:
    """Element-wise real and imaginary parts in basis order {|00>,|01>,|10>,|11>}."""
    rho = np.asarray(result.rho_est, dtype=complex)
    return rho.real.copy(), rho.imag.copy()

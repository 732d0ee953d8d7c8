"""Open-system dynamics of two qubits exchanging excitations through the diode.

The Hamiltonian couples the qubits with a complex exchange amplitude
J = |J| e^{i phi}; dissipation combines individual relaxation with a
collective cross-qubit decay channel. The collective channel's jump operator
is sqrt(Gamma) * (sigma_-^1 + sigma_-^2), i.e. the full rate table is
[[gamma_1 + Gamma, Gamma], [Gamma, gamma_2 + Gamma]]: the cross rate Gamma
interferes with the coupling phase and makes excitation transfer directional,
while the matching diagonal terms keep the map completely positive.

Basis order is {|00>, |01>, |10>, |11>} with the first label belonging to
qubit 1. Time is measured in units of 1/|J|.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    NonPhysicalStateError,
    NonPositiveRateMatrixWarning,
    StepFailureError,
    ValidationError,
)
from .modes import ComplexCoupling

__all__ = [
    "TwoQubitParams",
    "TwoQubitState",
    "DynamicsResult",
    "ket",
    "density",
    "ideal_bell_superposition",
    "build_hamiltonian",
    "lindblad_rhs",
    "build_liouvillian",
    "evolve",
    "half_iswap_state",
    "concurrence",
    "contrast_map",
    "contrast_time_map",
]

SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

SM1 = np.kron(SIGMA_MINUS, IDENTITY_2)
SM2 = np.kron(IDENTITY_2, SIGMA_MINUS)
SP1 = np.kron(SIGMA_PLUS, IDENTITY_2)
SP2 = np.kron(IDENTITY_2, SIGMA_PLUS)
SZ1 = np.kron(SIGMA_Z, IDENTITY_2)
SZ2 = np.kron(IDENTITY_2, SIGMA_Z)
YY = np.kron(SIGMA_Y, SIGMA_Y)

_BASIS_INDEX = {"00": 0, "01": 1, "10": 2, "11": 3}


@dataclass(frozen=True)
class TwoQubitParams:
    """Qubit frequencies, complex coupling, and the dissipation rates."""

    omega1: float
    omega2: float
    coupling: ComplexCoupling
    gamma1: tuple[float, float] = (0.0, 0.0)
    gamma_collective: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gamma1", tuple(float(g) for g in self.gamma1))
        if len(self.gamma1) != 2:
            raise ValidationError("gamma1 must hold one rate per qubit")
        if any(g < 0.0 for g in self.gamma1) or self.gamma_collective < 0.0:
            raise ValidationError("decay rates must be >= 0")


@dataclass(frozen=True)
class TwoQubitState:
    """A 4x4 density matrix over {|00>, |01>, |10>, |11>}."""

    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        object.__setattr__(self, "rho", rho)
        if rho.shape != (4, 4):
            raise ValidationError(f"rho must be 4x4, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValidationError("rho must be Hermitian within 1e-12")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise ValidationError("rho must have unit trace within 1e-10")


@dataclass(frozen=True)
class DynamicsResult:
    """Populations and concurrence on a time grid, plus physicality diagnostics."""

    times: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    concurrence: np.ndarray
    rho_at: np.ndarray | None = field(default=None, repr=False)
    min_eigenvalue: float = 0.0
    physical: bool = True


def ket(label: str) -> np.ndarray:
    """Computational basis vector, e.g. ket('01') for qubit 2 excited."""
    if label not in _BASIS_INDEX:
        raise ValidationError(f"unknown basis label {label!r}")
    vec = np.zeros(4, dtype=complex)
    vec[_BASIS_INDEX[label]] = 1.0
    return vec


def density(label: str) -> np.ndarray:
    """Pure-state density matrix of a computational basis state."""
    vec = ket(label)
    return np.outer(vec, vec.conj())


def ideal_bell_superposition(phi: float) -> np.ndarray:
    """Lossless half-iSWAP output from |01>: (|10> + i e^{i phi} |01>)/sqrt(2)."""
    vec = np.zeros(4, dtype=complex)
    vec[_BASIS_INDEX["10"]] = 1.0
    vec[_BASIS_INDEX["01"]] = 1j * np.exp(1j * phi)
    return vec / math.sqrt(2.0)


def build_hamiltonian(p: TwoQubitParams) -> np.ndarray:
    """Excitation-conserving Hamiltonian with complex exchange amplitude.

    The single-excitation matrix element is <01|H|10> = |J| e^{i phi}; the
    reversed element is its conjugate, so phase antisymmetry under qubit
    exchange is built in and H is Hermitian for any phi.
    """
    j = p.coupling.magnitude * np.exp(1j * p.coupling.phase)
    h = 0.5 * p.omega1 * SZ1 + 0.5 * p.omega2 * SZ2
    h = h + j * (SM1 @ SP2) + np.conj(j) * (SP1 @ SM2)
    return h


def _rate_matrix(p: TwoQubitParams, warn: bool = True) -> np.ndarray:
    g1, g2 = p.gamma1
    gc = p.gamma_collective
    if warn and gc > 0.0 and gc > math.sqrt(g1 * g2):
        warnings.warn(
            NonPositiveRateMatrixWarning(
                f"cross decay {gc} exceeds sqrt(gamma1*gamma2)="
                f"{math.sqrt(g1 * g2)}; bare rate table is not PSD, using the "
                "completely positive collective-channel realization"
            )
        )
    return np.array([[g1 + gc, gc], [gc, g2 + gc]], dtype=complex)


def build_liouvillian(p: TwoQubitParams, warn: bool = True) -> np.ndarray:
    """16x16 generator acting on row-major flattened density matrices."""
    h = build_hamiltonian(p)
    eye = np.eye(4, dtype=complex)
    # vec(A @ rho @ B) = kron(A, B.T) @ vec(rho) in row-major layout
    liou = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    rates = _rate_matrix(p, warn=warn)
    lowering = (SM1, SM2)
    raising = (SP1, SP2)
    for i in range(2):
        for jdx in range(2):
            g = rates[i, jdx]
            if g == 0.0:
                continue
            sandwich = np.kron(lowering[jdx], raising[i].T)
            anti = raising[i] @ lowering[jdx]
            liou = liou + g * (
                sandwich
                - 0.5 * (np.kron(anti, eye) + np.kron(eye, anti.T))
            )
    return liou


def lindblad_rhs(p: TwoQubitParams, rho: np.ndarray) -> np.ndarray:
    """Time derivative of the density matrix under the full generator."""
    rho = np.asarray(rho, dtype=complex)
    return (build_liouvillian(p, warn=False) @ rho.reshape(16)).reshape(4, 4)


def evolve(
    p: TwoQubitParams,
    rho0: np.ndarray,
    t_final: float,
    n_times: int = 201,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    store_states: bool = False,
) -> DynamicsResult:
    """Integrate the master equation with an adaptive embedded Runge-Kutta pair.

    Populations are reported as excitation probabilities (<sigma_z>+1)/2. The
    smallest density-matrix eigenvalue over the stored grid is monitored;
    ``physical`` clears only if it dips below -1e-6.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    TwoQubitState(rho0)
    times = np.linspace(0.0, t_final, n_times)
    if t_final == 0.0:
        times = np.array([0.0])
    liou = build_liouvillian(p)

    def rhs(_t, y):
        return liou @ y

    sol = solve_ivp(
        rhs,
        t_span=(0.0, max(t_final, 0.0)),
        y0=rho0.reshape(16),
        t_eval=times,
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise StepFailureError(f"integrator failed: {sol.message}")
    rhos = sol.y.T.reshape(-1, 4, 4)

    n1 = (np.einsum("tij,ji->t", rhos, SZ1).real + 1.0) / 2.0
    n2 = (np.einsum("tij,ji->t", rhos, SZ2).real + 1.0) / 2.0
    conc = np.array([concurrence(r) for r in rhos])
    min_eig = float(
        min(np.linalg.eigvalsh(0.5 * (r + r.conj().T)).min() for r in rhos)
    )
    return DynamicsResult(
        times=times,
        n1=n1,
        n2=n2,
        concurrence=conc,
        rho_at=rhos if store_states else None,
        min_eigenvalue=min_eig,
        physical=min_eig >= -1e-6,
    )


def half_iswap_state(p: TwoQubitParams, rho0: np.ndarray) -> TwoQubitState:
    """State after evolving for the half-iSWAP time t = pi/(4|J|)."""
    j = p.coupling.magnitude
    if not j > 0.0:
        raise ValidationError("half-iSWAP needs a nonzero coupling magnitude")
    result = evolve(p, rho0, t_final=math.pi / (4.0 * j), n_times=2, store_states=True)
    return TwoQubitState(result.rho_at[-1])


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit state.

    The l_i are the descending square roots of the eigenvalues of
    rho (sy x sy) rho* (sy x sy). They are evaluated as the singular values
    of sqrt(rho) (sy x sy) sqrt(rho)* -- the same numbers (M M^dag is similar
    to the spin-flip product), but free of the square-root noise
    amplification a non-Hermitian eigensolve suffers on rank-deficient
    states. States whose spectrum dips below -1e-8 (making the spin-flip
    product indefinite at that scale) are rejected as non-physical.
    """
    rho = np.array(rho, dtype=complex, order="C")
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if w.min() < -1e-8:
        raise NonPhysicalStateError(
            f"state spectrum is non-physical: min eigenvalue {w.min():.3e}"
        )
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    m = sqrt_rho @ YY @ sqrt_rho.conj()
    lams = np.linalg.svd(m, compute_uv=False)
    value = lams[0] - lams[1] - lams[2] - lams[3]
    if -1e-9 <= value < 0.0:
        value = 0.0
    return float(max(0.0, value))


def _with(p: TwoQubitParams, phase: float, gamma_collective: float) -> TwoQubitParams:
    return TwoQubitParams(
        omega1=p.omega1,
        omega2=p.omega2,
        coupling=ComplexCoupling(
            j_r=p.coupling.magnitude * math.cos(phase),
            j_nr=p.coupling.magnitude * math.sin(phase),
        ),
        gamma1=p.gamma1,
        gamma_collective=gamma_collective,
    )


def _contrast_row(args) -> np.ndarray:
    # tight tolerances: the phi = 0 column and the phi -> -phi antisymmetry
    # are certified to 1e-9, below the default integrator accuracy
    p_base, phase, gamma_grid, t_eval = args
    row = np.empty(len(gamma_grid))
    for col, gamma in enumerate(gamma_grid):
        p = _with(p_base, phase, float(gamma))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonPositiveRateMatrixWarning)
            c01 = evolve(p, density("01"), t_eval, n_times=2,
                         rtol=1e-12, atol=1e-14).concurrence[-1]
            c10 = evolve(p, density("10"), t_eval, n_times=2,
                         rtol=1e-12, atol=1e-14).concurrence[-1]
        row[col] = c01 - c10
    return row


def contrast_map(
    p_base: TwoQubitParams,
    phi_grid,
    gamma_grid,
    t_eval: float,
    max_workers: int | None = None,
) -> np.ndarray:
    """Entanglement-transfer contrast C_01 - C_10 at ``t_eval`` over a
    (phase, cross-decay) grid.

    Rows follow ``phi_grid``, columns ``gamma_grid``. Cells are independent;
    ``max_workers`` > 1 fans rows out to processes with a deterministic merge.
    """
    phi_grid = np.asarray(phi_grid, dtype=float)
    gamma_grid = np.asarray(gamma_grid, dtype=float)
    if phi_grid.size == 0 or gamma_grid.size == 0:
        raise ValidationError("grids must be non-empty")
    g1, g2 = p_base.gamma1
    if float(gamma_grid.max()) > math.sqrt(g1 * g2):
        warnings.warn(
            NonPositiveRateMatrixWarning(
                "cross decay exceeds sqrt(gamma1*gamma2) on part of the grid; "
                "using the completely positive collective-channel realization"
            )
        )
    tasks = [(p_base, float(phase), gamma_grid, t_eval) for phase in phi_grid]
    if max_workers is not None and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(_contrast_row, tasks))
    else:
        rows = [_contrast_row(t) for t in tasks]
    return np.vstack(rows)


def contrast_time_map(
    p_base: TwoQubitParams,
    phi_grid,
    t_grid,
    max_workers: int | None = None,
) -> np.ndarray:
    """Contrast C_01 - C_10 over a (phase, time) grid at fixed cross-decay."""
    phi_grid = np.asarray(phi_grid, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    if phi_grid.size == 0 or t_grid.size == 0:
        raise ValidationError("grids must be non-empty")

    def row_for(phase: float) -> np.ndarray:
        p = _with(p_base, phase, p_base.gamma_collective)
        t_final = float(t_grid[-1])
        n = len(t_grid)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonPositiveRateMatrixWarning)
            r01 = _evolve_on_grid(p, density("01"), t_grid)
            r10 = _evolve_on_grid(p, density("10"), t_grid)
        return r01 - r10

    g1, g2 = p_base.gamma1
    if p_base.gamma_collective > math.sqrt(g1 * g2):
        warnings.warn(
            NonPositiveRateMatrixWarning(
                "cross decay exceeds sqrt(gamma1*gamma2); using the completely "
                "positive collective-channel realization"
            )
        )
    return np.vstack([row_for(float(phase)) for phase in phi_grid])


def _evolve_on_grid(p: TwoQubitParams, rho0: np.ndarray, t_grid) -> np.ndarray:
    """Concurrence sampled on an arbitrary increasing time grid (t_grid[0] may be 0)."""
    t_grid = np.asarray(t_grid, dtype=float)
    liou = build_liouvillian(p, warn=False)
    sol = solve_ivp(
        lambda _t, y: liou @ y,
        t_span=(0.0, float(t_grid[-1])),
        y0=np.asarray(rho0, dtype=complex).reshape(16),
        t_eval=t_grid,
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    if not sol.success:
        raise StepFailureError(f"integrator failed: {sol.message}")
    rhos = sol.y.T.reshape(-1, 4, 4)
    return np.array([concurrence(r) for r in rhos])

"""Simulation toolkit for a flux-biased asymmetric-SQUID superconducting diode
used as a nonreciprocal circuit-QED element."""

__version__ = "0.1.0"

from .diode import (
    DiodeCharacterization,
    JunctionParams,
    SquidConfig,
    characterize_diode,
    critical_currents,
    diode_efficiency,
    find_phi_min,
    junction_cpr,
    junction_potential,
    squid_potential,
    taylor_coefficients,
)
from .dynamics import (
    DynamicsResult,
    TwoQubitParams,
    TwoQubitState,
    build_hamiltonian,
    concurrence,
    contrast_map,
    evolve,
    half_iswap_state,
    lindblad_rhs,
)
from .modes import (
    AsymmetryModel,
    ComplexCoupling,
    ModePair,
    ModeSet,
    direction_shift,
    mode_asymmetry,
    mode_mixing_matrix,
    qubit_coupling,
)
from .spectroscopy import (
    CircuitConfig,
    DriveConfig,
    SpectrumTrace,
    classical_transmission,
    kinetic_inductance,
    linearized_spectrum,
    nonreciprocity_ratio,
    pump_steady_state,
    resonance_split,
)
from .tomography import (
    ReconstructionResult,
    TomographyRecord,
    bell_fidelity,
    density_matrix_report,
    linear_reconstruct,
    measure_expectations,
)
from .config import RunConfig, parse_config, serialize_config
from .presets import get_preset, list_presets
from .runner import RunManifest, run_experiment

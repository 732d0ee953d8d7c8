"""Experiment orchestration: expand a run config into CSV/JSON data files.

Outputs are deterministic for a fixed config and seed (full double precision,
fixed column order); the manifest is written last and lists every emitted
file with its checksum plus any warnings surfaced by the physics modules.
The manifest's timestamp is the one intentionally non-reproducible field.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import warnings
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig
from .diode import (
    JunctionParams,
    SquidConfig,
    characterize_diode,
    find_phi_min,
    taylor_coefficients,
)
from .dynamics import (
    TwoQubitParams,
    contrast_map,
    contrast_time_map,
    density,
    evolve,
    half_iswap_state,
)
from .errors import SdqsimWarning
from .modes import ComplexCoupling
from .spectroscopy import CircuitConfig, DriveConfig, resonance_split, spectrum_trace
from .tomography import (
    density_matrix_report,
    linear_reconstruct,
    measure_expectations,
)

__all__ = ["RunManifest", "run_experiment", "sweep_workers"]


@dataclass
class RunManifest:
    """Provenance record for one run: inputs, outputs, and warnings."""

    experiment: str
    seed: int
    config_sha256: str
    tool_version: str
    created_utc: str
    output_dir: str
    files: list[dict] = field(default_factory=list)
    warnings: list[dict] = field(default_factory=list)
    derived: dict = field(default_factory=dict)


def sweep_workers() -> int | None:
    """Parallelism cap for sweeps, from SDQSIM_THREADS (None = serial)."""
    raw = os.environ.get("SDQSIM_THREADS", "").strip()
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        return None
    return value if value > 1 else None


def _fmt(value: float) -> str:
    return f"{float(value):.17g}"


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = zip(*columns)
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_matrix_csv(
    path: Path, corner: str, row_values, col_values, matrix: np.ndarray
) -> None:
    lines = [",".join([corner] + [_fmt(v) for v in col_values])]
    for row_value, row in zip(row_values, matrix):
        lines.append(",".join([_fmt(row_value)] + [_fmt(v) for v in row]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_json(path: Path, obj) -> None:
    path.write_text(
        json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _squid_from(section) -> SquidConfig:
    return SquidConfig(
        j1=JunctionParams(tau=section.tau1, delta=section.delta1),
        j2=JunctionParams(tau=section.tau2, delta=section.delta2),
        phi_b=section.phi_b,
        temperature=section.temperature,
    )


def _run_diode_char(cfg: RunConfig, outdir: Path) -> tuple[list[Path], dict]:
    section = cfg.squid
    if section.phi_b_grid is None and section.tau1_grid is None:
        char = characterize_diode(_squid_from(section))
        path = outdir / "diode_char_characterization.json"
        _write_json(
            path,
            {
                "ic_plus": char.ic_plus,
                "ic_minus": char.ic_minus,
                "eta": char.eta,
                "phi_min": char.phi_min,
                "c": [float(v) for v in char.c],
            },
        )
        return [path], {"eta": char.eta}

    phi_values = (
        section.phi_b_grid.values()
        if section.phi_b_grid is not None
        else np.array([section.phi_b])
    )
    tau_values = (
        section.tau1_grid.values()
        if section.tau1_grid is not None
        else np.array([section.tau1])
    )
    c3 = np.empty((len(phi_values), len(tau_values)))
    for i, phi_b in enumerate(phi_values):
        for j, tau1 in enumerate(tau_values):
            squid = SquidConfig(
                j1=JunctionParams(tau=float(tau1), delta=section.delta1),
                j2=JunctionParams(tau=section.tau2, delta=section.delta2),
                phi_b=float(phi_b),
                temperature=section.temperature,
            )
            phi_min = find_phi_min(squid)
            c3[i, j] = taylor_coefficients(squid, phi_min)[2]
    path = outdir / "diode_char_c3_map.csv"
    _write_matrix_csv(path, "phi_b/tau1", phi_values, tau_values, c3)
    return [path], {"c3_max_abs": float(np.max(np.abs(c3)))}


def _run_spectroscopy(cfg: RunConfig, outdir: Path) -> tuple[list[Path], dict]:
    sec = cfg.circuit
    omega_r = 1.0 / math.sqrt(sec.l0 * sec.c_shunt)
    circuit = CircuitConfig(
        l0=sec.l0,
        c_shunt=sec.c_shunt,
        r_loss=sec.r_loss,
        z0=sec.z0,
        kappa1=sec.kappa1_ratio * omega_r,
        kappa2=sec.kappa2_ratio * omega_r,
        lambda_kerr=sec.kerr_ratio * omega_r,
        i_applied=sec.i_applied,
        ic_plus=sec.ic_plus,
        ic_minus=sec.ic_minus,
    )
    dsec = cfg.drive
    probe = np.linspace(
        dsec.probe_min_ratio * omega_r,
        dsec.probe_max_ratio * omega_r,
        dsec.probe_points,
    )
    drive = DriveConfig(
        eps_pump=dsec.eps_pump_ratio * omega_r,
        omega_pump=dsec.pump_ratio * omega_r,
        eps_probe=dsec.eps_probe_ratio * omega_r,
        probe_grid=probe,
    )
    trace = spectrum_trace(circuit, drive, method=dsec.method,
                           include_idler=dsec.include_idler)
    path = outdir / f"spectroscopy_spectrum_{dsec.method}.csv"
    _write_csv(
        path,
        ["omega_over_omega_r", "re_s21", "im_s21", "re_s12", "im_s12", "r_ratio"],
        [
            trace.omega / omega_r,
            trace.s_forward.real,
            trace.s_forward.imag,
            trace.s_backward.real,
            trace.s_backward.imag,
            trace.r_ratio,
        ],
    )
    split = resonance_split(circuit) / omega_r
    derived = {
        "method": dsec.method,
        "delta_omega_over_omega_r": split,
        "delta_omega_mhz": split * sec.omega_r_ghz * 1e3,
        "peak_forward_over_omega_r": float(
            trace.omega[int(np.argmax(np.abs(trace.s_forward)))] / omega_r
        ),
        "peak_backward_over_omega_r": float(
            trace.omega[int(np.argmax(np.abs(trace.s_backward)))] / omega_r
        ),
    }
    return [path], derived


def _qubit_params(qsec, phase: float, gamma_collective: float) -> TwoQubitParams:
    j = qsec.j_magnitude
    return TwoQubitParams(
        omega1=qsec.omega1,
        omega2=qsec.omega2,
        coupling=ComplexCoupling(
            j_r=j * math.cos(phase), j_nr=j * math.sin(phase)
        ),
        gamma1=qsec.gamma1,
        gamma_collective=gamma_collective,
    )


def _run_dynamics(cfg: RunConfig, outdir: Path) -> tuple[list[Path], dict]:
    qsec = cfg.qubits
    j = qsec.j_magnitude
    initials = ("01", "10") if qsec.initial == "both" else (qsec.initial,)
    files: list[Path] = []
    index = {}
    for initial in initials:
        for idx, phase in enumerate(qsec.phases):
            params = _qubit_params(qsec, phase, qsec.gamma_collective)
            result = evolve(
                params,
                density(initial),
                t_final=qsec.t_final / j,
                n_times=qsec.n_times,
            )
            name = f"dynamics_trace_init{initial}_phi{idx:02d}.csv"
            path = outdir / name
            _write_csv(
                path,
                ["time", "n1", "n2", "concurrence"],
                [result.times * j, result.n1, result.n2, result.concurrence],
            )
            files.append(path)
            index[name] = {
                "initial": initial,
                "phase": phase,
                "gamma_collective": qsec.gamma_collective,
                "physical": result.physical,
                "min_eigenvalue": result.min_eigenvalue,
            }
    index_path = outdir / "dynamics_index.json"
    _write_json(index_path, index)
    files.append(index_path)
    return files, {"traces": len(index)}


def _run_contrast_map(cfg: RunConfig, outdir: Path) -> tuple[list[Path], dict]:
    qsec = cfg.qubits
    csec = cfg.contrast
    p_base = _qubit_params(qsec, 0.0, qsec.gamma_collective)
    phi_values = csec.phi_grid.values()
    j = qsec.j_magnitude
    if csec.mode == "phi-gamma":
        gamma_values = csec.gamma_grid.values()
        matrix = contrast_map(
            p_base,
            phi_values,
            gamma_values * j,
            csec.t_eval / j,
            max_workers=sweep_workers(),
        )
        path = outdir / "contrast_map_dc.csv"
        _write_matrix_csv(path, "phi/gamma_over_j", phi_values, gamma_values, matrix)
        col_values = gamma_values
    else:
        t_values = csec.t_grid.values()
        matrix = contrast_time_map(
            p_base, phi_values, t_values / j, max_workers=sweep_workers()
        )
        path = outdir / "contrast_map_dc.csv"
        _write_matrix_csv(path, "phi/time", phi_values, t_values, matrix)
        col_values = t_values
    flat = int(np.argmax(np.abs(matrix)))
    row, col = np.unravel_index(flat, matrix.shape)
    derived = {
        "mode": csec.mode,
        "argmax_abs_phi": float(phi_values[row]),
        "argmax_abs_col": float(col_values[col]),
        "max_abs_contrast": float(np.abs(matrix[row, col])),
    }
    return [path], derived


def _run_tomography(cfg: RunConfig, outdir: Path) -> tuple[list[Path], dict]:
    qsec = cfg.qubits
    tsec = cfg.tomography
    initial = "01" if qsec.initial == "both" else qsec.initial
    files: list[Path] = []
    index = {}
    for idx, case in enumerate(tsec.cases):
        params = _qubit_params(qsec, case.phase, case.gamma_collective)
        state = half_iswap_state(params, density(initial))
        record = measure_expectations(
            state.rho, shots=tsec.shots, seed=cfg.seed + idx
        )
        result = linear_reconstruct(record)
        re_part, im_part = density_matrix_report(result)
        name = f"tomography_{case.label}.json"
        path = outdir / name
        _write_json(
            path,
            {
                "re": [[float(v) for v in row] for row in re_part],
                "im": [[float(v) for v in row] for row in im_part],
                "fidelities": {k: float(v) for k, v in result.fidelity_targets.items()},
                "physical": result.physical,
            },
        )
        files.append(path)
        index[name] = {
            "label": case.label,
            "phase": case.phase,
            "gamma_collective": case.gamma_collective,
            "initial": initial,
            "shots": tsec.shots,
        }
    index_path = outdir / "tomography_index.json"
    _write_json(index_path, index)
    files.append(index_path)
    return files, {"cases": len(tsec.cases)}


_RUNNERS = {
    "diode-char": _run_diode_char,
    "spectroscopy": _run_spectroscopy,
    "dynamics": _run_dynamics,
    "contrast-map": _run_contrast_map,
    "tomography": _run_tomography,
}


def run_experiment(cfg: RunConfig) -> RunManifest:
    """Execute one experiment and write its data files plus the manifest.

    Deterministic for a fixed config and seed: rerunning produces
    byte-identical CSV/JSON data files (the manifest timestamp is exempt).
    """
    from .config import serialize_config

    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    config_text = serialize_config(cfg)
    config_hash = hashlib.sha256(config_text.encode("utf-8")).hexdigest()

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SdqsimWarning)
        paths, derived = _RUNNERS[cfg.experiment](cfg, outdir)

    seen = set()
    warning_entries = []
    for item in caught:
        if not issubclass(item.category, SdqsimWarning):
            continue
        key = (item.category.__name__, str(item.message))
        if key in seen:
            continue
        seen.add(key)
        warning_entries.append(
            {"category": item.category.__name__, "message": str(item.message)}
        )

    manifest = RunManifest(
        experiment=cfg.experiment,
        seed=cfg.seed,
        config_sha256=config_hash,
        tool_version=__version__,
        created_utc=datetime.now(timezone.utc).isoformat(),
        output_dir=str(outdir),
        files=[
            {
                "name": path.name,
                "sha256": _sha256(path),
                "bytes": path.stat().st_size,
            }
            for path in paths
        ],
        warnings=warning_entries,
        derived=derived,
    )
    _write_json(outdir / "run_manifest.json", asdict(manifest))
    return manifest

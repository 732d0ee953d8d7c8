"""Declarative run files: strict TOML parsing, validation, serialization.

A run file selects exactly one experiment and supplies the sections that
experiment needs. Unknown sections or keys are hard errors; every physical
invariant of the sub-configs is checked here so the runner can assume clean
inputs. Frequencies are dimensionless ratios to the resonator frequency, with
``omega_r_ghz`` as the single absolute anchor used only for reporting.
"""

from __future__ import annotations

import math

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ParseError, ValidationError

__all__ = [
    "GridSpec",
    "SquidSection",
    "CircuitSection",
    "DriveSection",
    "QubitsSection",
    "ContrastSection",
    "TomographyCase",
    "TomographySection",
    "RunConfig",
    "EXPERIMENTS",
    "parse_config",
    "parse_config_text",
    "serialize_config",
]

EXPERIMENTS = ("diode-char", "spectroscopy", "dynamics", "contrast-map", "tomography")


@dataclass(frozen=True)
class GridSpec:
    """Uniform inclusive grid: ``points`` values from ``min`` to ``max``."""

    min: float
    max: float
    points: int

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ValidationError("grid bounds must be finite")
        if self.max < self.min:
            raise ValidationError(f"grid max {self.max} below min {self.min}")
        if self.points < 1:
            raise ValidationError(f"grid points must be >= 1, got {self.points}")

    def values(self):
        import numpy as np

        if self.points == 1:
            return np.array([self.min])
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class SquidSection:
    tau1: float
    tau2: float
    phi_b: float = 0.0
    delta1: float = 1.0
    delta2: float = 1.0
    temperature: float = 0.0
    phi_b_grid: GridSpec | None = None
    tau1_grid: GridSpec | None = None

    def __post_init__(self):
        for name in ("tau1", "tau2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name}: tau must lie in [0,1], got {value}")
        for name in ("delta1", "delta2"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"{name} must be positive")
        if not math.isfinite(self.phi_b):
            raise ValidationError("phi_b must be finite")
        if self.temperature < 0.0:
            raise ValidationError("temperature must be >= 0")


@dataclass(frozen=True)
class CircuitSection:
    omega_r_ghz: float = 5.0
    l0: float = 1.0
    c_shunt: float = 1.0
    r_loss: float = 0.002
    z0: float = 0.02
    kappa1_ratio: float = 5e-5
    kappa2_ratio: float = 5e-5
    kerr_ratio: float = 0.0
    i_applied: float = 0.0
    ic_plus: float = 1.5
    ic_minus: float = 1.0

    def __post_init__(self):
        for name in ("omega_r_ghz", "l0", "c_shunt", "r_loss", "z0",
                     "kappa1_ratio", "kappa2_ratio", "ic_plus", "ic_minus"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"{name} must be positive")
        if self.kerr_ratio < 0.0:
            raise ValidationError("kerr_ratio must be >= 0")
        if self.i_applied < 0.0:
            raise ValidationError("i_applied must be >= 0")
        if not self.i_applied < min(self.ic_plus, self.ic_minus):
            raise ValidationError(
                "i_applied must stay below min(ic_plus, ic_minus)"
            )


@dataclass(frozen=True)
class DriveSection:
    pump_ratio: float = 0.99
    eps_pump_ratio: float = 1e-3
    eps_probe_ratio: float = 1e-5
    probe_min_ratio: float = 0.8
    probe_max_ratio: float = 1.2
    probe_points: int = 4001
    method: str = "quantum"
    include_idler: bool = False

    def __post_init__(self):
        if not self.pump_ratio > 0.0:
            raise ValidationError("pump_ratio must be positive")
        if self.eps_pump_ratio < 0.0 or self.eps_probe_ratio < 0.0:
            raise ValidationError("drive amplitudes must be >= 0")
        if not 0.0 < self.probe_min_ratio < self.probe_max_ratio:
            raise ValidationError("probe range must satisfy 0 < min < max")
        if self.probe_points < 2:
            raise ValidationError("probe_points must be >= 2")
        if self.method not in ("quantum", "classical"):
            raise ValidationError(
                f"method must be 'quantum' or 'classical', got {self.method!r}"
            )


@dataclass(frozen=True)
class QubitsSection:
    omega1: float = 0.0
    omega2: float = 0.0
    j_magnitude: float = 1.0
    phases: tuple[float, ...] = (0.0,)
    gamma1: tuple[float, float] = (0.0, 0.0)
    gamma_collective: float = 0.0
    initial: str = "01"
    t_final: float = 8.0
    n_times: int = 401

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        object.__setattr__(self, "gamma1", tuple(float(g) for g in self.gamma1))
        if not self.j_magnitude > 0.0:
            raise ValidationError("j_magnitude must be positive")
        if not self.phases:
            raise ValidationError("phases must be non-empty")
        if len(self.gamma1) != 2 or any(g < 0.0 for g in self.gamma1):
            raise ValidationError("gamma1 must be two rates >= 0")
        if self.gamma_collective < 0.0:
            raise ValidationError("gamma_collective must be >= 0")
        if self.initial not in ("01", "10", "both"):
            raise ValidationError(
                f"initial must be '01', '10' or 'both', got {self.initial!r}"
            )
        if not self.t_final > 0.0:
            raise ValidationError("t_final must be positive")
        if self.n_times < 2:
            raise ValidationError("n_times must be >= 2")


@dataclass(frozen=True)
class ContrastSection:
    mode: str = "phi-gamma"
    phi_grid: GridSpec = field(default_factory=lambda: GridSpec(-math.pi, math.pi, 41))
    gamma_grid: GridSpec = field(default_factory=lambda: GridSpec(0.0, 4.0, 41))
    t_grid: GridSpec = field(default_factory=lambda: GridSpec(0.0, 2.0, 41))
    t_eval: float = math.pi / 4.0

    def __post_init__(self):
        if self.mode not in ("phi-gamma", "phi-time"):
            raise ValidationError(
                f"mode must be 'phi-gamma' or 'phi-time', got {self.mode!r}"
            )
        if self.mode == "phi-gamma" and self.gamma_grid.min < 0.0:
            raise ValidationError("gamma grid must be >= 0")
        if not self.t_eval >= 0.0:
            raise ValidationError("t_eval must be >= 0")


@dataclass(frozen=True)
class TomographyCase:
    label: str
    phase: float
    gamma_collective: float = 0.0

    def __post_init__(self):
        if not self.label or not all(c.isalnum() or c in "_-" for c in self.label):
            raise ValidationError(
                f"case label must be alphanumeric/underscore/dash, got {self.label!r}"
            )
        if self.gamma_collective < 0.0:
            raise ValidationError("gamma_collective must be >= 0")


@dataclass(frozen=True)
class TomographySection:
    shots: int = 0
    cases: tuple[TomographyCase, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cases", tuple(self.cases))
        if self.shots < 0:
            raise ValidationError("shots must be >= 0")
        if not self.cases:
            raise ValidationError("tomography needs at least one case")
        labels = [c.label for c in self.cases]
        if len(set(labels)) != len(labels):
            raise ValidationError("tomography case labels must be unique")


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    seed: int = 0
    output_dir: str = "out"
    squid: SquidSection | None = None
    circuit: CircuitSection | None = None
    drive: DriveSection | None = None
    qubits: QubitsSection | None = None
    contrast: ContrastSection | None = None
    tomography: TomographySection | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValidationError(
                f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}"
            )
        if self.seed < 0:
            raise ValidationError("seed must be >= 0")
        required = {
            "diode-char": ("squid",),
            "spectroscopy": ("circuit", "drive"),
            "dynamics": ("qubits",),
            "contrast-map": ("qubits", "contrast"),
            "tomography": ("qubits", "tomography"),
        }[self.experiment]
        for name in required:
            if getattr(self, name) is None:
                raise ValidationError(
                    f"experiment {self.experiment!r} requires a [{name}] section"
                )

    def with_output_dir(self, output_dir: str) -> "RunConfig":
        return replace(self, output_dir=output_dir)


_SCALARS = {float: (int, float), int: (int,), str: (str,), bool: (bool,)}


def _coerce(section: str, key: str, value, kind):
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"[{section}] {key} must be a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(f"[{section}] {key} must be an integer, got {value!r}")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            raise ValidationError(f"[{section}] {key} must be a boolean, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ValidationError(f"[{section}] {key} must be a string, got {value!r}")
        return value
    raise AssertionError(kind)


def _parse_grid(section: str, table) -> GridSpec:
    if not isinstance(table, dict):
        raise ValidationError(f"[{section}] must be a table with min/max/points")
    extra = set(table) - {"min", "max", "points"}
    if extra:
        raise ValidationError(f"[{section}] unknown keys: {sorted(extra)}")
    for key in ("min", "max", "points"):
        if key not in table:
            raise ValidationError(f"[{section}] missing key {key!r}")
    return GridSpec(
        min=_coerce(section, "min", table["min"], float),
        max=_coerce(section, "max", table["max"], float),
        points=_coerce(section, "points", table["points"], int),
    )


def _parse_flat(section_name: str, table: dict, cls, special=()):
    known = {f.name for f in fields(cls)} - set(special)
    extra = set(table) - known - set(special)
    if extra:
        raise ValidationError(f"[{section_name}] unknown keys: {sorted(extra)}")
    kwargs = {}
    hints = {f.name: f.type for f in fields(cls)}
    for key in known:
        if key not in table:
            continue
        value = table[key]
        hint = hints[key]
        if hint in ("float", float):
            kwargs[key] = _coerce(section_name, key, value, float)
        elif hint in ("int", int):
            kwargs[key] = _coerce(section_name, key, value, int)
        elif hint in ("bool", bool):
            kwargs[key] = _coerce(section_name, key, value, bool)
        elif hint in ("str", str):
            kwargs[key] = _coerce(section_name, key, value, str)
        elif key == "phases":
            if not isinstance(value, list):
                raise ValidationError(f"[{section_name}] phases must be a list")
            kwargs[key] = tuple(
                _coerce(section_name, "phases[]", v, float) for v in value
            )
        elif key == "gamma1":
            if not isinstance(value, list) or len(value) != 2:
                raise ValidationError(f"[{section_name}] gamma1 must be a 2-list")
            kwargs[key] = tuple(
                _coerce(section_name, "gamma1[]", v, float) for v in value
            )
        else:
            raise AssertionError(f"unhandled field {key} of {cls.__name__}")
    return kwargs


def parse_config_text(text: str) -> RunConfig:
    """Parse and fully validate a TOML run file given as a string."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"malformed run file: {exc}") from exc
    return _build_config(data)


def parse_config(path) -> RunConfig:
    """Parse and fully validate a TOML run file on disk."""
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"run file not found: {path}")
    return parse_config_text(path.read_text(encoding="utf-8"))


def _build_config(data: dict) -> RunConfig:
    known_sections = {
        "run", "squid", "circuit", "drive", "qubits", "contrast", "tomography",
    }
    extra = set(data) - known_sections
    if extra:
        raise ValidationError(f"unknown sections: {sorted(extra)}")
    run = data.get("run")
    if not isinstance(run, dict):
        raise ValidationError("a [run] section with an 'experiment' key is required")
    run_extra = set(run) - {"experiment", "seed", "output_dir"}
    if run_extra:
        raise ValidationError(f"[run] unknown keys: {sorted(run_extra)}")
    if "experiment" not in run:
        raise ValidationError("[run] experiment is required")

    squid = circuit = drive = qubits = contrast = tomo = None

    if "squid" in data:
        table = dict(data["squid"])
        grids = {}
        for grid_key in ("phi_b_grid", "tau1_grid"):
            if grid_key in table:
                grids[grid_key] = _parse_grid(f"squid.{grid_key}", table.pop(grid_key))
        kwargs = _parse_flat("squid", table, SquidSection,
                             special=("phi_b_grid", "tau1_grid"))
        squid = SquidSection(**kwargs, **grids)

    if "circuit" in data:
        circuit = CircuitSection(**_parse_flat("circuit", dict(data["circuit"]), CircuitSection))

    if "drive" in data:
        drive = DriveSection(**_parse_flat("drive", dict(data["drive"]), DriveSection))

    if "qubits" in data:
        qubits = QubitsSection(**_parse_flat("qubits", dict(data["qubits"]), QubitsSection))

    if "contrast" in data:
        table = dict(data["contrast"])
        grids = {}
        for grid_key in ("phi_grid", "gamma_grid", "t_grid"):
            if grid_key in table:
                grids[grid_key] = _parse_grid(f"contrast.{grid_key}", table.pop(grid_key))
        kwargs = _parse_flat("contrast", table, ContrastSection,
                             special=("phi_grid", "gamma_grid", "t_grid"))
        contrast = ContrastSection(**kwargs, **grids)

    if "tomography" in data:
        table = dict(data["tomography"])
        raw_cases = table.pop("cases", None)
        if raw_cases is None:
            raise ValidationError("[tomography] needs at least one [[tomography.cases]]")
        if not isinstance(raw_cases, list):
            raise ValidationError("[tomography] cases must be an array of tables")
        cases = []
        for idx, entry in enumerate(raw_cases):
            if not isinstance(entry, dict):
                raise ValidationError(f"[tomography.cases[{idx}]] must be a table")
            kwargs = _parse_flat(f"tomography.cases[{idx}]", entry, TomographyCase)
            if "label" not in kwargs or "phase" not in kwargs:
                raise ValidationError(
                    f"[tomography.cases[{idx}]] needs 'label' and 'phase'"
                )
            cases.append(TomographyCase(**kwargs))
        kwargs = _parse_flat("tomography", table, TomographySection, special=("cases",))
        tomo = TomographySection(**kwargs, cases=tuple(cases))

    return RunConfig(
        experiment=_coerce("run", "experiment", run["experiment"], str),
        seed=_coerce("run", "seed", run.get("seed", 0), int),
        output_dir=_coerce("run", "output_dir", run.get("output_dir", "out"), str),
        squid=squid,
        circuit=circuit,
        drive=drive,
        qubits=qubits,
        contrast=contrast,
        tomography=tomo,
    )


def _toml_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)):
        return str(value)
    if isinstance(value, float):
        text = repr(value)
        # TOML floats need a dot or exponent
        if "." not in text and "e" not in text and "E" not in text:
            text += ".0"
        return text
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise AssertionError(f"cannot serialize {value!r}")


def _emit_table(lines: list[str], name: str, obj, skip=()):
    lines.append(f"[{name}]")
    for f in fields(obj):
        if f.name in skip:
            continue
        value = getattr(obj, f.name)
        if value is None:
            continue
        if isinstance(value, tuple):
            lines.append(
                f"{f.name} = [" + ", ".join(_toml_scalar(v) for v in value) + "]"
            )
        else:
            lines.append(f"{f.name} = {_toml_scalar(value)}")
    lines.append("")


def serialize_config(cfg: RunConfig) -> str:
    """Emit a TOML text that parses back to an equal RunConfig."""
    lines: list[str] = ["[run]"]
    lines.append(f"experiment = {_toml_scalar(cfg.experiment)}")
    lines.append(f"seed = {_toml_scalar(cfg.seed)}")
    lines.append(f"output_dir = {_toml_scalar(cfg.output_dir)}")
    lines.append("")
    if cfg.squid is not None:
        _emit_table(lines, "squid", cfg.squid, skip=("phi_b_grid", "tau1_grid"))
        for grid_key in ("phi_b_grid", "tau1_grid"):
            grid = getattr(cfg.squid, grid_key)
            if grid is not None:
                _emit_table(lines, f"squid.{grid_key}", grid)
    if cfg.circuit is not None:
        _emit_table(lines, "circuit", cfg.circuit)
    if cfg.drive is not None:
        _emit_table(lines, "drive", cfg.drive)
    if cfg.qubits is not None:
        _emit_table(lines, "qubits", cfg.qubits)
    if cfg.contrast is not None:
        _emit_table(lines, "contrast", cfg.contrast, skip=("phi_grid", "gamma_grid", "t_grid"))
        for grid_key in ("phi_grid", "gamma_grid", "t_grid"):
            _emit_table(lines, f"contrast.{grid_key}", getattr(cfg.contrast, grid_key))
    if cfg.tomography is not None:
        _emit_table(lines, "tomography", cfg.tomography, skip=("cases",))
        for case in cfg.tomography.cases:
            _emit_table(lines, "[tomography.cases]", case)
    return "\n".join(lines)

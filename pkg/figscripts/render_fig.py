#!/usr/bin/env python3
"""Render sdqsim preset outputs into figure panels.

Read-only consumer of the CLI's CSV/JSON files: every number shown comes
straight from the data files (no smoothing, no renormalization). Rendering is
deterministic for identical inputs.

Usage:
    render_fig.py --preset fig2b --in out/fig2b --out fig2b.png
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

SPECTRUM_COLUMNS = [
    "omega_over_omega_r", "re_s21", "im_s21", "re_s12", "im_s12", "r_ratio",
]
TRACE_COLUMNS = ["time", "n1", "n2", "concurrence"]

# colors follow the reference panels: phase -pi/2 green, 0 red, +pi/2 blue
PHASE_COLORS = ["tab:green", "tab:red", "tab:blue"]

PRESET_INPUTS = {
    "fig2a": ["spectroscopy_spectrum_quantum.csv"],
    "fig2b": ["spectroscopy_spectrum_quantum.csv"],
    "fig2c": ["spectroscopy_spectrum_quantum.csv"],
    "fig2d": ["diode_char_c3_map.csv"],
    "fig3ab": ["dynamics_index.json"],
    "fig3cd": ["dynamics_index.json"],
    "fig3ef": ["dynamics_index.json"],
    "fig3g": ["contrast_map_dc.csv"],
    "fig3h": ["contrast_map_dc.csv"],
    "fig4": ["tomography_index.json"],
}


class RenderError(RuntimeError):
    pass


class MissingColumnError(RenderError):
    def __init__(self, column: str, path):
        super().__init__(f"missing column {column!r} in {path}")
        self.column = column


@dataclass(frozen=True)
class FigureSpec:
    """One rendering job: preset, resolved input files, output image path."""

    preset: str
    input_dir: Path
    output_path: Path

    def __post_init__(self):
        if self.preset not in PRESET_INPUTS:
            raise RenderError(
                f"unknown preset {self.preset!r}; known: {', '.join(sorted(PRESET_INPUTS))}"
            )
        for name in PRESET_INPUTS[self.preset]:
            if not (self.input_dir / name).is_file():
                raise RenderError(f"required input missing: {self.input_dir / name}")

    @property
    def inputs(self) -> list[Path]:
        return [self.input_dir / name for name in PRESET_INPUTS[self.preset]]


def read_columns(path: Path, required: list[str]) -> dict[str, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumnError(required[0], path) from None
        for column in required:
            if column not in header:
                raise MissingColumnError(column, path)
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise RenderError(f"no data rows in {path}")
    data = np.asarray(rows)
    return {name: data[:, header.index(name)] for name in required}


def read_matrix(path: Path) -> tuple[str, np.ndarray, np.ndarray, np.ndarray]:
    """Matrix CSV with grid values in the header row and first column."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise RenderError(f"empty matrix file {path}") from None
        corner = header[0]
        col_values = np.array([float(v) for v in header[1:]])
        row_values = []
        cells = []
        for row in reader:
            if not row:
                continue
            row_values.append(float(row[0]))
            cells.append([float(v) for v in row[1:]])
    if not cells:
        raise RenderError(f"no data rows in {path}")
    return corner, np.array(row_values), col_values, np.array(cells)


def _finish(fig, spec: FigureSpec) -> Path:
    spec.output_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(
        spec.output_path,
        dpi=150,
        metadata={"Software": "figscripts"},
    )
    plt.close(fig)
    return spec.output_path


def render_spectrum(spec: FigureSpec) -> Path:
    cols = read_columns(spec.inputs[0], SPECTRUM_COLUMNS)
    omega = cols["omega_over_omega_r"]
    s21 = np.hypot(cols["re_s21"], cols["im_s21"])
    s12 = np.hypot(cols["re_s12"], cols["im_s12"])
    fig, ax = plt.subplots(figsize=(5.2, 3.6), constrained_layout=True)
    ax.plot(omega, s21, color="tab:blue", label=r"$|S_{21}|$")
    ax.plot(omega, s12, color="tab:red", linestyle="--", label=r"$|S_{12}|$")
    ax.set_xlabel(r"$\omega_{pr}/\omega_r$")
    ax.set_ylabel("transmission magnitude")
    ax.set_title(f"{spec.preset}: forward vs backward transmission")
    ax.legend()
    return _finish(fig, spec)


def render_ratio(spec: FigureSpec) -> Path:
    cols = read_columns(spec.inputs[0], SPECTRUM_COLUMNS)
    fig, ax = plt.subplots(figsize=(5.2, 3.6), constrained_layout=True)
    ax.plot(cols["omega_over_omega_r"], cols["r_ratio"], color="tab:purple")
    ax.axhline(0.0, color="0.6", linewidth=0.8)
    ax.set_xlabel(r"$\omega_{pr}/\omega_r$")
    ax.set_ylabel(r"$R(\omega)$")
    ax.set_ylim(-1.05, 1.05)
    ax.set_title("nonreciprocity ratio")
    return _finish(fig, spec)


def _diverging_heatmap(ax, row_values, col_values, matrix, xlabel, ylabel):
    limit = float(np.max(np.abs(matrix)))
    limit = limit if limit > 0 else 1.0
    mesh = ax.pcolormesh(
        col_values, row_values, matrix, cmap="RdBu_r", vmin=-limit, vmax=limit,
        shading="auto",
    )
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    return mesh


def render_c3_map(spec: FigureSpec) -> Path:
    _, phi_b, tau1, c3 = read_matrix(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(5.2, 4.0), constrained_layout=True)
    mesh = _diverging_heatmap(ax, phi_b, tau1, c3, r"$\tau_1$", r"$\Phi_b$ (rad)")
    fig.colorbar(mesh, ax=ax, label=r"$c_3/\Delta$")
    ax.set_title(r"cubic coefficient vs bias and transmission")
    return _finish(fig, spec)


def _load_traces(spec: FigureSpec):
    index = json.loads(spec.inputs[0].read_text(encoding="utf-8"))
    traces = []
    for name in sorted(index):
        meta = index[name]
        path = spec.input_dir / name
        if not path.is_file():
            raise RenderError(f"trace listed in index but missing: {path}")
        cols = read_columns(path, TRACE_COLUMNS)
        traces.append((meta["initial"], float(meta["phase"]), cols))
    traces.sort(key=lambda item: (item[0], item[1]))
    return traces


def render_populations(spec: FigureSpec) -> Path:
    traces = _load_traces(spec)
    fig, axes = plt.subplots(1, 2, figsize=(8.4, 3.4), constrained_layout=True,
                             sharey=True)
    for idx, (initial, phase, cols) in enumerate(traces):
        color = PHASE_COLORS[idx % len(PHASE_COLORS)]
        label = rf"$\varphi = {phase / np.pi:+.2g}\pi$"
        axes[0].plot(cols["time"], cols["n1"], color=color, label=label)
        axes[1].plot(cols["time"], cols["n2"], color=color, label=label)
    axes[0].set_ylabel("excitation probability")
    axes[0].set_title(r"$n_1(t)$")
    axes[1].set_title(r"$n_2(t)$")
    for ax in axes:
        ax.set_xlabel(r"$Jt$")
    axes[0].legend(fontsize=8)
    return _finish(fig, spec)


def render_concurrence(spec: FigureSpec) -> Path:
    traces = _load_traces(spec)
    initials = sorted({item[0] for item in traces})
    fig, axes = plt.subplots(1, len(initials), figsize=(4.2 * len(initials), 3.4),
                             constrained_layout=True, sharey=True, squeeze=False)
    for col_idx, initial in enumerate(initials):
        ax = axes[0][col_idx]
        phase_idx = 0
        for trace_initial, phase, cols in traces:
            if trace_initial != initial:
                continue
            ax.plot(
                cols["time"], cols["concurrence"],
                color=PHASE_COLORS[phase_idx % len(PHASE_COLORS)],
                label=rf"$\varphi = {phase / np.pi:+.2g}\pi$",
            )
            phase_idx += 1
        ax.set_xlabel(r"$Jt$")
        ax.set_title(rf"$C_{{{initial}}}(t)$")
    axes[0][0].set_ylabel("concurrence")
    axes[0][0].legend(fontsize=8)
    return _finish(fig, spec)


def render_contrast(spec: FigureSpec) -> Path:
    corner, phi, cols, matrix = read_matrix(spec.inputs[0])
    xlabel = r"$\Gamma/J$" if corner.endswith("gamma_over_j") else r"$Jt$"
    fig, ax = plt.subplots(figsize=(5.2, 4.0), constrained_layout=True)
    mesh = _diverging_heatmap(ax, phi, cols, matrix, xlabel, r"$\varphi$ (rad)")
    fig.colorbar(mesh, ax=ax, label=r"$\Delta C$")
    ax.set_title("entanglement-transfer contrast")
    return _finish(fig, spec)


def render_tomography(spec: FigureSpec) -> Path:
    index = json.loads(spec.inputs[0].read_text(encoding="utf-8"))
    names = sorted(index)
    # constrained_layout clashes with dense 3d-axes grids; fixed margins instead
    fig = plt.figure(figsize=(7.5, 3.0 * len(names)))
    fig.subplots_adjust(left=0.02, right=0.98, bottom=0.03, top=0.95,
                        wspace=0.15, hspace=0.35)
    basis = [r"$|00\rangle$", r"$|01\rangle$", r"$|10\rangle$", r"$|11\rangle$"]
    positions = np.arange(4)
    xs, ys = np.meshgrid(positions, positions, indexing="ij")
    for row_idx, name in enumerate(names):
        payload = json.loads((spec.input_dir / name).read_text(encoding="utf-8"))
        for col_idx, part in enumerate(("re", "im")):
            values = np.asarray(payload[part], dtype=float)
            ax = fig.add_subplot(
                len(names), 2, 2 * row_idx + col_idx + 1, projection="3d"
            )
            flat = values.ravel()
            # blue bars for positive entries, red for negative
            colors = ["#2166ac" if v >= 0 else "#b2182b" for v in flat]
            ax.bar3d(
                xs.ravel() - 0.35, ys.ravel() - 0.35, np.zeros(16),
                0.7, 0.7, flat, color=colors, shade=True,
            )
            ax.set_zlim(-0.55, 0.55)
            ax.set_xticks(positions)
            ax.set_yticks(positions)
            ax.set_xticklabels(basis, fontsize=6)
            ax.set_yticklabels(basis, fontsize=6)
            label = index[name].get("label", name)
            ax.set_title(
                rf"{label}: $\mathrm{{{'Re' if part == 're' else 'Im'}}}[\rho]$",
                fontsize=8,
            )
    return _finish(fig, spec)


RENDERERS = {
    "fig2a": render_spectrum,
    "fig2b": render_spectrum,
    "fig2c": render_ratio,
    "fig2d": render_c3_map,
    "fig3ab": render_populations,
    "fig3cd": render_populations,
    "fig3ef": render_concurrence,
    "fig3g": render_contrast,
    "fig3h": render_contrast,
    "fig4": render_tomography,
}


def render(spec: FigureSpec) -> Path:
    """Render one preset's panels; returns the written image path."""
    return RENDERERS[spec.preset](spec)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Render sdqsim preset outputs into figure panels."
    )
    parser.add_argument("--preset", required=True, help="preset name, e.g. fig2b")
    parser.add_argument("--in", dest="input_dir", required=True,
                        help="directory holding the preset's CSV/JSON outputs")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(
            preset=args.preset,
            input_dir=Path(args.input_dir),
            output_path=Path(args.out),
        )
        path = render(spec)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

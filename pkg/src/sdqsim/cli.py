"""Command-line entry point.

Exit codes: 0 on success, 2 on configuration/validation failure, 3 on
numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import parse_config
from .errors import NumericalError, ParseError, ValidationError
from .presets import get_preset, list_presets
from .runner import run_experiment

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdqsim",
        description=(
            "Superconducting-diode circuit-QED simulator: diode characterization, "
            "nonreciprocal spectra, entanglement dynamics, and Bell-state tomography."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a run file")
    run.add_argument("config", help="path to a TOML run file")
    run.add_argument("--out", help="override the output directory")

    preset = sub.add_parser("preset", help="execute a built-in preset")
    preset.add_argument("name", help="preset name (see list-presets)")
    preset.add_argument("--out", help="output directory (default: out/<name>)")

    sub.add_parser("list-presets", help="list built-in presets")

    validate = sub.add_parser("validate", help="parse and validate a run file")
    validate.add_argument("config", help="path to a TOML run file")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "list-presets":
            for name in list_presets():
                print(name)
            return 0
        if args.command == "validate":
            cfg = parse_config(args.config)
            print(f"OK: {args.config} ({cfg.experiment})")
            return 0
        if args.command == "run":
            cfg = parse_config(args.config)
            if args.out:
                cfg = cfg.with_output_dir(args.out)
            manifest = run_experiment(cfg)
        else:  # preset
            cfg = get_preset(args.name)
            cfg = cfg.with_output_dir(args.out or f"out/{args.name}")
            manifest = run_experiment(cfg)
        print(f"wrote {len(manifest.files)} file(s) to {manifest.output_dir}")
        for entry in manifest.warnings:
            print(f"warning [{entry['category']}]: {entry['message']}", file=sys.stderr)
        return 0
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

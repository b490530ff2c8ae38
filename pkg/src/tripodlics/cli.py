"""Command-line interface: propagate, scan-area, scan-width,
scan-detuning, report.

Exit codes: 0 success, 1 configuration error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .config import ConfigError, load_experiment
from .propagate import PropagationError
from . import scans


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tripodlics",
        description="Three bound states coupled through a common "
                    "ionization continuum: propagation and parameter scans.")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "propagate": "integrate one configuration and write the trajectory CSV",
        "scan-area": "closed-form populations vs. total pulse area "
                     "(coincident pulses)",
        "scan-width": "populations vs. pulse width at trapping detunings",
        "scan-detuning": "populations over a static-detuning grid",
        "report": "JSON diagnostics at the pulse peak",
    }
    for name, desc in descriptions.items():
        p = sub.add_parser(name, help=desc)
        p.add_argument("--config", required=True, help="TOML config file")
        p.add_argument("--out", required=True, help="output file path")
        p.add_argument("--workers", type=int, default=1,
                       help="worker threads for scans (default 1)")
        p.add_argument("--tol", type=float, default=None,
                       help="override the integration tolerance")
    return parser


def _require(scan_spec, section: str):
    if scan_spec is None:
        raise ConfigError(f"missing table [scan.{section}]")
    return scan_spec


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return 1
    try:
        exp = load_experiment(args.config)
        if args.tol is not None:
            if args.tol <= 0:
                raise ConfigError(f"--tol must be > 0, got {args.tol}")
            grid = dataclasses.replace(exp.system.grid, tolerance=args.tol)
            exp = dataclasses.replace(
                exp, system=dataclasses.replace(exp.system, grid=grid))
    except (ConfigError, tomllib.TOMLDecodeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    try:
        if args.command == "propagate":
            scans.run_propagate(exp.system, args.out)
        elif args.command == "scan-area":
            scans.run_scan_area(exp.system, _require(exp.area, "area"),
                                args.out, workers=args.workers)
        elif args.command == "scan-width":
            scans.run_scan_width(exp.system, _require(exp.width, "width"),
                                 args.out, workers=args.workers)
        elif args.command == "scan-detuning":
            scans.run_scan_detuning(exp.system,
                                    _require(exp.detuning, "detuning"),
                                    args.out, workers=args.workers)
        else:
            scans.run_report(exp.system, args.out)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (PropagationError, ArithmeticError, ValueError) as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

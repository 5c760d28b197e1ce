"""Command-line front end for the experiment harness.

Each subcommand runs one experiment kind and writes a CSV plus a JSON
manifest into the output directory; ``validate`` runs the built-in check
battery instead. Exit codes: 0 on success, 2 when the configuration is
unusable (bad config file, infeasible design, degenerate geometry, too few
trials for the requested false-alarm rate), 1 when a numerical routine
fails or a validation check does not pass.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .errors import (
    ConfigError,
    DegenerateGeometry,
    DimensionMismatch,
    Infeasible,
    InsufficientTrials,
    PassiveIsacError,
)
from .harness import SCALES, ExperimentConfig, load_config, run_experiment
from .scenario import ScenarioConfig
from .validate import format_record, run_validate

_CONFIG_EXITS = (ConfigError, DimensionMismatch, Infeasible, DegenerateGeometry,
                 InsufficientTrials)

_KINDS = ("calibrate", "roc", "tradeoff", "contour", "sweep", "beampattern",
          "heatmap")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="passive-isac",
        description="Passive detection experiments for multi-static ISAC scenes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="YAML file with scenario / experiment / output sections")
    common.add_argument("--out", metavar="DIR",
                        help="directory for the CSV and manifest (default from config)")
    common.add_argument("--seed", type=int, metavar="N",
                        help="master seed for every stream in the run")
    common.add_argument("--trials", type=int, metavar="N",
                        help="trial count: calibration draws for calibrate, "
                             "detection trials for roc, per-point trials elsewhere")
    common.add_argument("--pfa", type=float, metavar="P",
                        help="false-alarm probability the run operates at")
    common.add_argument("--scale", choices=sorted(SCALES),
                        help="preset trial counts: desk is laptop-sized, paper "
                             "matches the published operating point")
    for kind in _KINDS:
        sub.add_parser(kind, parents=[common],
                       help=f"run the {kind} experiment and write its files")
    val = sub.add_parser("validate", parents=[common],
                         help="run the built-in end-to-end checks")
    val.add_argument("--only", metavar="NAME", action="append",
                     help="run just this check (repeatable)")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        config = load_config(args.config)
    else:
        config = ExperimentConfig(scenario=ScenarioConfig())
    overrides = {"kind": args.command}
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.pfa is not None:
        overrides["pfa"] = args.pfa
    if args.scale is not None:
        overrides["scale"] = args.scale
    if args.trials is not None:
        if args.command == "calibrate":
            overrides["n_calibration"] = args.trials
        elif args.command == "roc":
            overrides["n_detection"] = args.trials
        else:
            overrides["n_trials"] = args.trials
    return replace(config, **overrides)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            records = run_validate(args.only)
            for rec in records:
                print(format_record(rec))
            failed = [r for r in records if not r["passed"]]
            if failed:
                print(f"{len(failed)} of {len(records)} checks failed",
                      file=sys.stderr)
                return 1
            return 0
        config = _config_from_args(args)
        table, paths = run_experiment(config)
        for path in paths:
            print(path)
        return 0
    except _CONFIG_EXITS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PassiveIsacError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3

"""
Command-line entry point.

    nanoexpand simulate  --config paper-defaults --out runs/a --ensemble 100 --keep-trajectories
    nanoexpand oracle    --out runs/oracle
    nanoexpand calibrate --out runs/cal [--trajectory traj.csv] [--cooled cold.csv]
    nanoexpand analyze   --trajectories runs/a --out runs/a/analysis
    nanoexpand protocol

Exit codes: 0 success, 1 surfaced error, 2 usage error.
"""

import sys
import argparse
import logging
from typing import List, Optional

from .. import __version__
from ..functional.log_config import setup_logging
from ..functional.result_monad import Failure, Result, from_callable
from .commands import run_analyze, run_calibrate, run_oracle, run_protocol, run_simulate
from .config import DEFAULT_CONFIG_NAME, ExperimentConfig, config_from_manifest, format_value, parse_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=DEFAULT_CONFIG_NAME,
                        help=f"config file or bundled config name (default: {DEFAULT_CONFIG_NAME})")
    common.add_argument("--manifest", default=None,
                        help="re-run with the configuration recorded in a manifest")
    common.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
    common.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="logging level (default: NANOEXPAND_LOG_LEVEL or INFO)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="nanoexpand",
        description="Phase-space expansion of a levitated nanoparticle by trap-frequency jumps",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", parents=[common], help="Monte Carlo ensemble")
    simulate.add_argument("--out", required=True, help="output directory")
    simulate.add_argument("--ensemble", type=int, default=None, help="number of trajectories")
    simulate.add_argument("--keep-trajectories", action="store_true", default=None,
                          help="write one t,z,v CSV per trajectory")
    simulate.add_argument("--workers", type=int, default=None,
                          help="worker threads (default: one per physical core)")

    oracle = commands.add_parser("oracle", parents=[common], help="exact linear prediction")
    oracle.add_argument("--out", required=True, help="output directory")

    calibrate = commands.add_parser("calibrate", parents=[common], help="spectrum fit and equipartition")
    calibrate.add_argument("--out", required=True, help="output directory")
    source = calibrate.add_mutually_exclusive_group(required=True)
    source.add_argument("--trajectory", default=None, help="thermal t,z,v record to calibrate")
    source.add_argument("--synthetic", action="store_true", help="calibrate a synthetic thermal record")
    calibrate.add_argument("--cooled", default=None, help="record converted with the fitted factor")

    analyze = commands.add_parser("analyze", parents=[common], help="measurement chain over stored runs")
    analyze.add_argument("--trajectories", required=True, help="directory of traj_XXXXX.csv files")
    analyze.add_argument("--out", required=True, help="output directory")

    commands.add_parser("protocol", parents=[common], help="print the pulse schedule")
    return parser


def load_config(args: argparse.Namespace) -> Result[ExperimentConfig, Exception]:
    if args.manifest:
        loaded = from_callable(lambda: config_from_manifest(args.manifest))
    else:
        loaded = from_callable(lambda: parse_config(args.config))
    return loaded.map(lambda config: config.with_overrides(
        seed=args.seed,
        ensemble=getattr(args, "ensemble", None),
        workers=getattr(args, "workers", None),
        keep_trajectories=getattr(args, "keep_trajectories", None),
    ))


def dispatch(args: argparse.Namespace, config: ExperimentConfig) -> Result:
    if args.command == "simulate":
        return run_simulate(config, args.out)
    if args.command == "oracle":
        return run_oracle(config, args.out)
    if args.command == "calibrate":
        trajectory = None if args.synthetic else args.trajectory
        return run_calibrate(config, args.out, trajectory_path=trajectory, cooled_path=args.cooled)
    if args.command == "analyze":
        return run_analyze(config, args.trajectories, args.out)
    if args.command == "protocol":
        return run_protocol(config).foreach(
            lambda summary: print("".join(f"{k} = {format_value(v)}\n" for k, v in summary.items()), end="")
        )
    return Failure(ValueError(f"unknown command {args.command}"))


def _report_failure(error: Exception) -> int:
    logger.error(f"{type(error).__name__}: {error}")
    print(f"error: {error}", file=sys.stderr)
    return EXIT_ERROR


def _report_success(args: argparse.Namespace, value: object) -> int:
    if args.command != "protocol":
        outputs = len(getattr(value, "checksums", {}))
        print(f"{args.command}: wrote {outputs} files and manifest.txt to {args.out}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    setup_logging(args.log_level)
    result = load_config(args).flat_map(lambda config: dispatch(args, config))
    return result.fold(lambda value: _report_success(args, value), _report_failure)


if __name__ == "__main__":
    sys.exit(main())

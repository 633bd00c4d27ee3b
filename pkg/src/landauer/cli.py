"""Command-line interface.

    landauer list                 catalogue of bundled scenarios
    landauer check CONFIG.json    validate a config and print the merged form
    landauer run CONFIG.json      run it: CSV tables, figures, report.json

A config only needs a "scenario" key; everything else inherits the
scenario's defaults and unknown keys are rejected. Exit codes: 0 all checks
passed, 1 some check failed, 2 bad configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ._version import __version__
from .errors import ConfigError, NumericalCheckError
from .harness.config import load_config, parse_config
from .harness.report import format_value
from .harness.scenarios import list_scenarios, run_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="landauer",
        description="Finite-dimensional quantum thermodynamics laboratory.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario from a JSON config")
    run_p.add_argument("config", help="path to the scenario config (JSON)")
    run_p.add_argument("--out", help="output directory (overrides the config)")
    run_p.add_argument("--seed", type=int, help="random seed (overrides the config)")
    run_p.add_argument("--bits", action="store_true",
                       help="report entropic columns in bits instead of nats")

    sub.add_parser("list", help="list bundled scenarios")

    check_p = sub.add_parser("check", help="validate a config without running it")
    check_p.add_argument("config", help="path to the scenario config (JSON)")
    return parser


def _load_with_overrides(path: str, out: str | None, seed: int | None):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if out is not None:
        data["output"] = out
    if seed is not None:
        data["seed"] = seed
    return parse_config(data)


def _cmd_list() -> int:
    for name, doc in list_scenarios().items():
        print(f"{name:22s} {doc}")
    return 0


def _cmd_check(path: str) -> int:
    cfg = load_config(path)
    print(json.dumps(cfg.raw, indent=2, sort_keys=True))
    print(f"ok: {cfg.scenario} (config hash {cfg.content_hash()[:12]})", file=sys.stderr)
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = _load_with_overrides(args.config, args.out, args.seed)
    report = run_scenario(cfg, bits=args.bits)
    for check in report.checks:
        tag = "PASS" if check.passed else "FAIL"
        print(f"[{tag}] {check.name}: {format_value(check.measured)} "
              f"{check.comparator} {format_value(check.tolerance)}")
    verdict = "PASS" if report.passed else "FAIL"
    failed = sum(not c.passed for c in report.checks)
    print(f"{verdict}: {cfg.scenario} "
          f"({len(report.checks) - failed}/{len(report.checks)} checks, "
          f"report in {cfg.output}/report.json)")
    return 0 if report.passed else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return _cmd_list()
        if args.command == "check":
            return _cmd_check(args.config)
        return _cmd_run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalCheckError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

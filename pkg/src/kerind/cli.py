"""Command-line entry point: ``kerind --scenario FILE [--command NAME]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .scenario import COMMANDS, ScenarioError, list_fixtures, load_scenario
from .report import run


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kerind", description="Kernel of K_0 for finite group actions on finite rings.")
    p.add_argument("--scenario", help="scenario YAML file or bundled fixture name")
    p.add_argument("--command", choices=COMMANDS, help="run one command instead of the scenario's task list")
    p.add_argument("--n", type=int, action="append", dest="levels", help="matrix level (repeatable)")
    p.add_argument("--cap", type=int, help="enumeration cap")
    p.add_argument("--bound", type=int, help="stabilization bound")
    p.add_argument("--json", type=Path, help="write the JSON report here")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized property samples")
    p.add_argument("--list-fixtures", action="store_true", help="print bundled fixture names and exit")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_fixtures:
        print("\n".join(list_fixtures()))
        return 0
    if not args.scenario:
        print("error: --scenario is required", file=sys.stderr)
        return 2
    for name, val in (("--n", min(args.levels or [1])), ("--cap", args.cap or 1), ("--bound", args.bound or 1)):
        if val <= 0:
            print(f"error: {name} must be positive", file=sys.stderr)
            return 2
    try:
        sc = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run(sc, args.command, args.levels, args.cap, args.bound, args.seed)
    print(report.table())
    if args.json:
        args.json.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())

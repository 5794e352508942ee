"""Command-line interface.

Subcommands: list-scenarios, run, quantize, reduce, report.  Exit codes:
0 = success (hypotheses-not-met included), 1 = a check failed, 2 = usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .catalog import build_scenario, list_scenarios
from .errors import QuantbenchError, SchemaError
from .reports import Report
from .runner import run_scenario
from .scenario_io import load_scenario_file


def _build(args):
    if args.scenario.endswith(".json") or os.path.sep in args.scenario:
        return load_scenario_file(args.scenario)
    return build_scenario(args.scenario, level=args.level)


def _emit(report: Report, args) -> int:
    if args.format == "json":
        text = report.to_json()
    else:
        text = report.to_text()
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 1 if report.failed else 0


def _cmd_list(args) -> int:
    rows = list_scenarios(args.filter or "")
    for row in rows:
        levels = "" if row["levels"] is None else \
            f" (levels {', '.join(str(l) for l in row['levels'])})"
        print(f"{row['name']:<28} {row['description']}{levels}")
    return 0


def _cmd_run(args) -> int:
    scenario = _build(args)
    checks = set(args.checks.split(",")) if args.checks else None
    report = run_scenario(scenario, checks=checks, seed=args.seed)
    return _emit(report, args)


def _cmd_quantize(args) -> int:
    scenario = _build(args)
    checks = {"quantize", "prequantize"}
    report = run_scenario(scenario, checks=checks, seed=args.seed)
    return _emit(report, args)


def _cmd_reduce(args) -> int:
    scenario = _build(args)
    checks = {"quantize", "reduce"}
    report = run_scenario(scenario, checks=checks, seed=args.seed)
    return _emit(report, args)


def _cmd_report(args) -> int:
    with open(args.file) as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"report file invalid: {exc}") from exc
    report = Report(data.get("scenario", "?"))
    from .reports import CheckRecord
    for rec in data.get("records", []):
        record = CheckRecord(rec["check"], rec["status"], rec.get("failures", []),
                             rec.get("notes", []), rec.get("details", {}),
                             rec.get("seconds", 0.0))
        report.add(record)
    report.conventions = data.get("conventions", [])
    sys.stdout.write(report.to_text())
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="quantbench",
        description="exact verification workbench for momentum maps, "
                    "prequantization and fiberwise quantization")
    sub = parser.add_subparsers(dest="command")

    p_list = sub.add_parser("list-scenarios", help="list the built-in catalog")
    p_list.add_argument("--filter", default="", help="substring filter")
    p_list.set_defaults(func=_cmd_list)

    def add_common(p):
        p.add_argument("scenario", help="catalog name or scenario JSON path")
        p.add_argument("--level", type=int, default=None,
                       help="level parameter for parametrized families")
        p.add_argument("--checks", default="",
                       help="comma-separated check ids or stage names")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", default="", help="write the report to a file")
        p.add_argument("--seed", type=int, default=1729,
                       help="seed for randomized property inputs")

    p_run = sub.add_parser("run", help="run the full verification stack")
    add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_quant = sub.add_parser("quantize", help="prequantization + quantization stages")
    add_common(p_quant)
    p_quant.set_defaults(func=_cmd_quantize)

    p_red = sub.add_parser("reduce", help="quantization + reduction stages")
    add_common(p_red)
    p_red.set_defaults(func=_cmd_reduce)

    p_rep = sub.add_parser("report", help="render a saved JSON report as text")
    p_rep.add_argument("file")
    p_rep.set_defaults(func=_cmd_report)

    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except (KeyError,) as exc:
        sys.stderr.write(f"unknown scenario: {exc}\n")
        return 2
    except SchemaError as exc:
        sys.stderr.write(f"schema error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"missing file: {exc}\n")
        return 2
    except QuantbenchError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

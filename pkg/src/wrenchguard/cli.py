"""Command-line front end: run, sweep, validate, serve.

Exit codes: 0 success, 1 validation failures (validate only), 2 configuration
errors (unreadable/invalid scenario, bad override), 3 runtime faults.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import re
import sys

from .scenarios import BUILTIN_SCENARIOS, config_from_dict, load_scenario
from .simulate import run_scenario, summarize, write_trace

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

_SEGMENT_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)((?:\[\d+\])*)$")


class ConfigError(Exception):
    pass


def _load_scenario_dict(ref):
    """Builtin scenario name or path to a JSON file -> raw dict."""
    if ref in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[ref]()
    if not os.path.exists(ref):
        raise ConfigError(
            f"no such scenario: {ref!r} is not a file and not one of {sorted(BUILTIN_SCENARIOS)}"
        )
    try:
        return load_scenario(ref)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text  # bare strings are allowed, e.g. controller.type=admittance


def apply_override(scenario: dict, path: str, value):
    """Set an existing dotted key (with optional [i] list indexing) in place.

    Only keys already present may be overridden; creating new ones would
    silently typo-fork the config.
    """
    node = scenario
    segments = path.split(".")
    for depth, seg in enumerate(segments):
        m = _SEGMENT_RE.match(seg)
        if not m:
            raise ConfigError(f"--set {path!r}: malformed segment {seg!r}")
        key, brackets = m.group(1), m.group(2)
        indices = [int(i) for i in re.findall(r"\[(\d+)\]", brackets)]
        last = depth == len(segments) - 1
        if not isinstance(node, dict) or key not in node:
            raise ConfigError(f"--set {path!r}: no such key {key!r}")
        if last and not indices:
            node[key] = value
            return
        node = node[key]
        for j, idx in enumerate(indices):
            if not isinstance(node, list) or idx >= len(node):
                raise ConfigError(f"--set {path!r}: index [{idx}] out of range")
            if last and j == len(indices) - 1:
                node[idx] = value
                return
            node = node[idx]
    raise AssertionError("unreachable")


def _build_config(args):
    scenario = _load_scenario_dict(args.scenario)
    for spec in args.set or []:
        if "=" not in spec:
            raise ConfigError(f"--set expects key=value, got {spec!r}")
        key, _, raw = spec.partition("=")
        apply_override(scenario, key.strip(), _parse_value(raw))
    if args.seed is not None:
        scenario["seed"] = args.seed
    try:
        return scenario, config_from_dict(scenario)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _limits_for_report(config):
    if config.controller == "wrench_qp":
        return config.controller_params.wrench_limits
    return config.report_limits


def _cmd_run(args):
    scenario, config = _build_config(args)
    name = scenario.get("name", "scenario")
    out = args.out or f"{name}_trace.csv"
    try:
        trace = run_scenario(config)
    except (RuntimeError, ValueError) as exc:
        print(f"runtime fault: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    raw_out = None
    if args.verbose:
        stem, ext = os.path.splitext(out)
        raw_out = f"{stem}_raw{ext or '.csv'}"
    write_trace(trace, out, raw_path=raw_out)
    report = {"scenario": name, "trace": out}
    if raw_out:
        report["raw_trace"] = raw_out
    report.update(summarize(trace, limits=_limits_for_report(config), desired_pose=config.desired_pose))
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _cmd_sweep(args):
    scenario, _ = _build_config(args)
    name = scenario.get("name", "scenario")
    axes = []
    for spec in args.grid:
        if "=" not in spec:
            raise ConfigError(f"--grid expects key=JSON_LIST, got {spec!r}")
        key, _, raw = spec.partition("=")
        values = _parse_value(raw)
        if not isinstance(values, list) or not values:
            raise ConfigError(f"--grid {key}: values must be a non-empty JSON list")
        axes.append((key.strip(), values))
    os.makedirs(args.out_dir, exist_ok=True)
    keys = [k for k, _ in axes]
    table_rows = []
    for cell, combo in enumerate(itertools.product(*(v for _, v in axes))):
        cell_dict = json.loads(json.dumps(scenario))  # deep copy via round-trip
        for key, value in zip(keys, combo):
            apply_override(cell_dict, key, value)
        try:
            config = config_from_dict(cell_dict)
        except ValueError as exc:
            raise ConfigError(f"cell {cell} ({dict(zip(keys, combo))}): {exc}") from exc
        try:
            trace = run_scenario(config)
        except (RuntimeError, ValueError) as exc:
            print(f"runtime fault in cell {cell}: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        trace_path = os.path.join(args.out_dir, f"cell_{cell:03d}_trace.csv")
        write_trace(trace, trace_path)
        s = summarize(trace, limits=_limits_for_report(config), desired_pose=config.desired_pose)
        row = {
            "cell": cell,
            **{k: json.dumps(v) for k, v in zip(keys, combo)},
            "trace": os.path.basename(trace_path),
            "max_abs_wrench": max(s["max_abs_wrench"]),
            "worst_violation_frac": s.get("worst_violation_frac", ""),
            "final_error_norm": s.get("final_error_norm", ""),
            "max_gamma": s["max_gamma"],
        }
        table_rows.append(row)
    table_path = os.path.join(args.out_dir, "sweep_summary.csv")
    cols = list(table_rows[0].keys())
    with open(table_path, "w") as f:
        f.write(",".join(cols) + "\n")
        for row in table_rows:
            f.write(",".join(str(row[c]) for c in cols) + "\n")
    print(json.dumps({"scenario": name, "cells": len(table_rows), "summary": table_path}, indent=2))
    return EXIT_OK


def _cmd_validate(args):
    results = []
    for ref in args.scenarios:
        entry = {"scenario": ref, "ok": True}
        try:
            config_from_dict(_load_scenario_dict(ref))
        except (ConfigError, ValueError) as exc:
            entry = {"scenario": ref, "ok": False, "error": str(exc)}
        results.append(entry)
    if args.json:
        print(json.dumps({"results": results}, indent=2))
    else:
        for entry in results:
            mark = "OK  " if entry["ok"] else "FAIL"
            line = f"{mark} {entry['scenario']}"
            if not entry["ok"]:
                line += f": {entry['error']}"
            print(line)
    return EXIT_OK if all(e["ok"] for e in results) else EXIT_INVALID


def _cmd_serve(args):
    scenario, config = _build_config(args)
    from .teleop import serve  # heavyweight import only when needed

    try:
        serve(
            config,
            host=args.host,
            port=args.port,
            record_dir=args.record,
            turbo=args.turbo,
            scenario_dict=scenario,
        )
    except (RuntimeError, ValueError) as exc:
        print(f"runtime fault: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wrenchguard",
        description="Wrench-limited compliant control: simulate, sweep, validate, teleoperate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("scenario", help="builtin scenario name or path to a scenario JSON file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override an existing scenario key (dotted path, JSON value)")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")

    p_run = sub.add_parser("run", help="run a scenario and write its trace CSV")
    add_common(p_run)
    p_run.add_argument("--out", default=None, help="trace CSV path (default <name>_trace.csv)")
    p_run.add_argument("--verbose", action="store_true",
                       help="also write the raw (uncompensated) wrench companion CSV")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a cartesian parameter grid")
    add_common(p_sweep)
    p_sweep.add_argument("--grid", action="append", required=True, metavar="KEY=JSON_LIST",
                         help="sweep axis, e.g. --grid controller.clf_rate=[1,5,10]")
    p_sweep.add_argument("--out-dir", default="sweep_out", help="directory for cell traces and the summary table")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_val = sub.add_parser("validate", help="check scenario files without running them")
    p_val.add_argument("scenarios", nargs="+", help="builtin names or JSON paths")
    p_val.add_argument("--json", action="store_true", help="machine-readable report")
    p_val.set_defaults(func=_cmd_validate)

    p_serve = sub.add_parser("serve", help="serve the interactive teleoperation endpoint")
    add_common(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--record", default=None, metavar="DIR",
                         help="record the session trace and command log into DIR")
    p_serve.add_argument("--turbo", action="store_true",
                         help="run ticks as fast as possible instead of wall-clock rate")
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

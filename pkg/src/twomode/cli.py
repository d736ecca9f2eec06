"""Command-line front end: run scenarios, phi sweeps, the dynamics grid,
and critical-parameter scans, writing deterministic CSV.

Exit codes: 0 success, 1 configuration error, 2 physics/validation error,
3 grid-report mismatch under ``table1 --strict``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .classify import scan_critical
from .errors import ConfigError, TwoModeError
from .scenarios import (
    FieldSpec,
    Scenario,
    build_engine,
    parse_config,
    result_to_csv,
    run_phi_sweep,
    run_scenario,
    sweep_to_csv,
    sweep_verdicts_to_csv,
    _fmt,
)
from .tableone import TableOneParams, table_one_report


def _load_scenarios(path: str) -> list[Scenario]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def _apply_overrides(scenario: Scenario, args) -> Scenario:
    params = scenario.params
    if args.n_max is not None:
        params = replace(params, n_max=args.n_max)
    if getattr(args, "phi", None) is not None and args.command == "run":
        params = replace(params, phi=float(args.phi))
    out = replace(scenario, params=params)
    if args.t_max is not None:
        out = replace(out, t_max=args.t_max)
    if args.samples is not None:
        out = replace(out, samples=args.samples)
    return out


def _parse_phi_grid(spec: str) -> np.ndarray:
    """'start:stop:count' (inclusive endpoints) or a comma list of values."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"bad phi grid {spec!r}; use start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ConfigError("phi grid needs at least one point")
        return np.linspace(start, stop, count)
    return np.array([float(tok) for tok in spec.split(",") if tok.strip()])


def _cmd_run(args) -> int:
    scenarios = _load_scenarios(args.config)
    if args.scenarios:
        wanted = set(args.scenarios)
        known = {s.name for s in scenarios}
        missing = wanted - known
        if missing:
            raise ConfigError(f"unknown scenario name(s): {sorted(missing)}")
        scenarios = [s for s in scenarios if s.name in wanted]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for scenario in scenarios:
        scenario = _apply_overrides(scenario, args)
        result = run_scenario(scenario)
        path = out_dir / f"{scenario.name}.csv"
        path.write_text(result_to_csv(result))
        print(f"{scenario.name}: verdict={result.verdict.label} -> {path}")
    return 0


def _cmd_sweep(args) -> int:
    scenarios = _load_scenarios(args.config)
    if args.scenario:
        scenarios = [s for s in scenarios if s.name == args.scenario]
        if not scenarios:
            raise ConfigError(f"unknown scenario name {args.scenario!r}")
    if len(scenarios) != 1:
        raise ConfigError("sweep needs exactly one scenario (use --scenario)")
    scenario = _apply_overrides(scenarios[0], args)
    grid = _parse_phi_grid(args.phi)
    sweep = run_phi_sweep(scenario, grid, jobs=args.jobs)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    series_path = out_dir / f"{scenario.name}_sweep.csv"
    verdict_path = out_dir / f"{scenario.name}_verdicts.csv"
    series_path.write_text(sweep_to_csv(sweep))
    verdict_path.write_text(sweep_verdicts_to_csv(sweep))
    for phi, result in zip(sweep.phi_grid, sweep.results):
        print(f"phi={phi:.6g}: {result.verdict.label}")
    print(f"-> {series_path}\n-> {verdict_path}")
    return 0


def _cmd_table1(args) -> int:
    params = TableOneParams()
    if args.n_max is not None:
        params = replace(params, n_max=args.n_max)
    if args.t_max is not None:
        params = replace(params, horizon=args.t_max)
    if args.samples is not None:
        params = replace(params, samples=args.samples)
    report = table_one_report(params)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    text_path = out_dir / "table1_report.txt"
    csv_path = out_dir / "table1_report.csv"
    text_path.write_text(report.render_text())
    csv_path.write_text(report.render_csv())
    print(report.render_text())
    print(f"-> {text_path}\n-> {csv_path}")
    if args.strict and report.unambiguous_mismatches:
        print(
            f"strict mode: {len(report.unambiguous_mismatches)} unambiguous "
            "cell(s) differ from the published labels",
            file=sys.stderr,
        )
        return 3
    return 0


_SCAN_AXES = ("nbar", "xi", "alpha", "beta", "phi")


def _cmd_scan(args) -> int:
    scenarios = _load_scenarios(args.config)
    if args.scenario:
        scenarios = [s for s in scenarios if s.name == args.scenario]
        if not scenarios:
            raise ConfigError(f"unknown scenario name {args.scenario!r}")
    if len(scenarios) != 1:
        raise ConfigError("scan needs exactly one scenario (use --scenario)")
    scenario = _apply_overrides(scenarios[0], args)
    if args.param not in _SCAN_AXES:
        raise ConfigError(f"unknown scan axis {args.param!r}; choose from {_SCAN_AXES}")
    lo, hi = (float(tok) for tok in args.range.split(":"))

    def with_value(x: float) -> Scenario:
        if args.param == "phi":
            return replace(scenario, params=replace(scenario.params, phi=x))
        field = scenario.field
        if args.param in ("nbar", "xi"):
            new_field = FieldSpec(field.kind, (x,) + field.params[1:])
        elif args.param == "alpha":
            new_field = FieldSpec(field.kind, (x,) + field.params[1:])
        else:  # beta
            new_field = FieldSpec(field.kind, field.params[:1] + (x,))
        return replace(scenario, field=new_field)

    def evaluate(x: float):
        sub = with_value(x)
        engine = build_engine(sub)
        times = sub.times
        conc = engine.series(times).get("concurrence")
        if conc is None:
            conc = np.array([engine.concurrence_at(t) for t in times])
        return engine.verdict(times, conc)

    result = scan_critical(evaluate, lo, hi, tol=args.tol, parameter=args.param)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{scenario.name}_scan_{args.param}.csv"
    lines = [
        f"# twomode {__version__}",
        f"# scenario = {scenario.name}",
        f"# parameter = {result.parameter}",
        f"# bracket = {_fmt(result.bracket[0])}:{_fmt(result.bracket[1])}",
        f"# critical = {_fmt(result.critical)}",
        f"# uncertainty = {_fmt(result.uncertainty)}",
        "value,label",
    ]
    for x, label in result.probes:
        lines.append(f"{_fmt(x)},{label}")
    path.write_text("\n".join(lines) + "\n")
    print(
        f"{args.param} critical = {result.critical:.6g} +/- {result.uncertainty:.2g} "
        f"(bracket [{result.bracket[0]:.6g}, {result.bracket[1]:.6g}]) -> {path}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twomode",
        description="entanglement dynamics of two atoms in a two-mode field",
    )
    parser.add_argument("--version", action="version", version=f"twomode {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="scenario config file")
        p.add_argument("--out-dir", default="out", help="output directory")
        p.add_argument("--t-max", type=float, default=None, help="override horizon (units 1/g)")
        p.add_argument("--samples", type=int, default=None, help="override sample count")
        p.add_argument("--n-max", type=int, default=None, help="override per-mode cutoff")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; no randomness in this version")

    p_run = sub.add_parser("run", help="run scenarios and write time-series CSV")
    common(p_run)
    p_run.add_argument("--phi", type=float, default=None, help="override separation phase")
    p_run.add_argument("scenarios", nargs="*", help="subset of scenario names")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep the separation phase")
    common(p_sweep)
    p_sweep.add_argument("--phi", required=True,
                         help="grid 'start:stop:count' or comma list, in [0, 2*pi)")
    p_sweep.add_argument("--scenario", default=None, help="scenario name to sweep")
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel sweep points")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_t1 = sub.add_parser("table1", help="evaluate the qualitative dynamics grid")
    common(p_t1, needs_config=False)
    p_t1.add_argument("--strict", action="store_true",
                      help="exit 3 when an unambiguous cell mismatches")
    p_t1.set_defaults(func=_cmd_table1)

    p_scan = sub.add_parser("scan", help="bisect a verdict boundary along a parameter")
    common(p_scan)
    p_scan.add_argument("--scenario", default=None, help="scenario name to scan")
    p_scan.add_argument("--param", required=True, help=f"axis: one of {_SCAN_AXES}")
    p_scan.add_argument("--range", required=True, help="lo:hi")
    p_scan.add_argument("--tol", type=float, default=0.02, help="parameter tolerance")
    p_scan.set_defaults(func=_cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except TwoModeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

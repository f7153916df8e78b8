"""Command-line interface: plan single instances, bench scenario batches.

Exit codes: 0 path found / batch ok, 1 not found, 2 timeout, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .grids import InputError, Instance, ParseError, load_map, load_scen
from .harness import aggregate, emit_report, run_batch, run_instance, write_records
from .planner import PlannerConfig, Verdict
from .svg import render_svg

EXIT_FOUND = 0
EXIT_NOT_FOUND = 1
EXIT_TIMEOUT = 2
EXIT_INPUT_ERROR = 3

DEFAULT_BENCH_CONFIGS = [
    {"mode": "lian", "delta_max": 20, "alpha_max": 25, "weight": 2, "time_cap": 30},
    {
        "mode": "elian",
        "delta_max": 20,
        "delta_min": 10,
        "k": 0.5,
        "alpha_max": 25,
        "weight": 2,
        "time_cap": 30,
    },
    {
        "mode": "elian",
        "delta_max": 20,
        "delta_min": 5,
        "k": 0.5,
        "alpha_max": 25,
        "weight": 2,
        "time_cap": 30,
    },
]


def _parse_cell(text: str) -> tuple[int, int]:
    try:
        col, row = (int(part) for part in text.split(","))
    except ValueError:
        raise InputError(f"expected COL,ROW, got {text!r}") from None
    return col, row


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anglepath",
        description="Angle-constrained grid path planning with LIAN and eLIAN.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="plan a single instance")
    plan.add_argument("--map", required=True, help="map file (.map or ASCII)")
    plan.add_argument("--start", required=True, help="start cell as COL,ROW")
    plan.add_argument("--goal", required=True, help="goal cell as COL,ROW")
    plan.add_argument("--alg", choices=["lian", "elian"], default="lian")
    plan.add_argument("--delta-max", type=float, default=20.0)
    plan.add_argument("--delta-min", type=float, default=None)
    plan.add_argument("--k", type=float, default=0.5)
    plan.add_argument("--angle", type=float, default=25.0, help="alpha_max in degrees")
    plan.add_argument("--hweight", type=float, default=2.0)
    plan.add_argument("--timeout", type=float, default=30.0, help="seconds")
    plan.add_argument("--svg", default=None, help="write an SVG drawing here")

    bench = sub.add_parser("bench", help="run scenario batches and aggregate")
    bench.add_argument("--scen", required=True, nargs="+", help="scenario files")
    bench.add_argument("--maps-dir", default=None, help="directory with map files")
    bench.add_argument("--configs", default=None, help="JSON file with config list")
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--out", default="bench", help="output file prefix")
    bench.add_argument("--format", choices=["csv", "json"], default="csv")
    bench.add_argument("--baseline", default=None, help="baseline algorithm label")
    return parser


def _cmd_plan(args) -> int:
    grid = load_map(args.map)
    cfg = PlannerConfig(
        mode=args.alg,
        delta_max=args.delta_max,
        delta_min=args.delta_min,
        k=args.k,
        alpha_max=args.angle,
        weight=args.hweight,
        time_cap=args.timeout,
    )
    instance = Instance(map_id=Path(args.map).name, start=_parse_cell(args.start), goal=_parse_cell(args.goal))
    record = run_instance(grid, instance, cfg)
    print(f"verdict: {record.verdict.value}")
    print(f"algorithm: {record.algorithm}")
    print(f"runtime_s: {record.runtime_s:.4f}")
    print(f"expansions: {record.expansions}")
    print(f"reinsertions: {record.reinsertions}")
    if record.verdict is Verdict.FOUND:
        print(f"path_length: {record.path_length:.4f}")
        print(f"accumulated_angle_deg: {record.accumulated_angle_deg:.4f}")
        print("path: " + " ".join(f"{c},{r}" for c, r in record.path))
        if args.svg:
            render_svg(grid, record.path, out=args.svg)
            print(f"svg: {args.svg}")
        return EXIT_FOUND
    if args.svg:
        render_svg(grid, None, out=args.svg)
        print(f"svg: {args.svg}")
    return EXIT_TIMEOUT if record.verdict is Verdict.TIMEOUT else EXIT_NOT_FOUND


def _load_configs(path: str | None) -> list[PlannerConfig]:
    if path is None:
        raw = DEFAULT_BENCH_CONFIGS
    else:
        raw = json.loads(Path(path).read_text())
        if not isinstance(raw, list) or not raw:
            raise InputError("config file must hold a nonempty JSON list")
    return [PlannerConfig.from_dict(item) for item in raw]


def _cmd_bench(args) -> int:
    scen_paths = [Path(p) for p in args.scen]
    scenarios = [load_scen(p) for p in scen_paths]
    configs = _load_configs(args.configs)
    maps_dir = args.maps_dir
    if maps_dir is None and scen_paths:
        maps_dir = scen_paths[0].parent

    records_path = Path(f"{args.out}.records.jsonl")
    records_path.unlink(missing_ok=True)
    result = run_batch(
        scenarios,
        configs,
        maps_dir=maps_dir,
        jobs=args.jobs,
        record_sink=lambda record: write_records([record], records_path),
    )
    for err in result.errors:
        print(f"warning: {err}", file=sys.stderr)
    if not result.records:
        print("error: no instances were run", file=sys.stderr)
        return EXIT_INPUT_ERROR

    baseline = args.baseline or configs[0].name
    report = aggregate(result.records, baseline=baseline)
    summary_path = Path(f"{args.out}.summary.{args.format}")
    summary_path.write_text(emit_report(report, args.format), encoding="utf-8")

    print(f"records: {records_path}")
    print(f"summary: {summary_path}")
    print(f"baseline: {baseline}")
    header = f"{'algorithm':<16} {'alpha':>6} {'solved':>10} {'success%':>9} {'med_rt_s':>9}"
    print(header)
    for group in report.groups:
        med = f"{group.median_runtime_s:.3f}" if group.median_runtime_s is not None else "-"
        print(
            f"{group.algorithm:<16} {group.alpha_max:>6g} "
            f"{group.solved:>4}/{group.instances:<5} {group.success_rate_pct:>8.2f} {med:>9}"
        )
    return EXIT_FOUND


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "plan":
            return _cmd_plan(args)
        return _cmd_bench(args)
    except (InputError, ParseError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

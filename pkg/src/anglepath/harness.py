"""Batch benchmark runner and aggregation.

One RunRecord per (instance, config) run; aggregation groups records by
(algorithm, alpha_max), computes success rates, and compares runtime and
path quality over the instances every algorithm at that angle solved.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .geometry import euclid, turn_angle
from .grids import (
    Cell,
    Grid,
    InputError,
    Instance,
    ParseError,
    ScenarioSet,
    check_instance,
    load_map,
)
from .planner import PlannerConfig, Verdict, search


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one search on one instance."""

    instance_id: str
    algorithm: str
    config: dict
    verdict: Verdict
    runtime_s: float
    path_length: float | None
    accumulated_angle_deg: float | None
    expansions: int
    reinsertions: int
    path: tuple[Cell, ...] | None

    def to_dict(self) -> dict:
        data = {
            "instance_id": self.instance_id,
            "algorithm": self.algorithm,
            "config": self.config,
            "verdict": self.verdict.value,
            "runtime_s": self.runtime_s,
            "path_length": self.path_length,
            "accumulated_angle_deg": self.accumulated_angle_deg,
            "expansions": self.expansions,
            "reinsertions": self.reinsertions,
            "path": [list(c) for c in self.path] if self.path is not None else None,
        }
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        path = data.get("path")
        return cls(
            instance_id=data["instance_id"],
            algorithm=data["algorithm"],
            config=dict(data["config"]),
            verdict=Verdict(data["verdict"]),
            runtime_s=data["runtime_s"],
            path_length=data.get("path_length"),
            accumulated_angle_deg=data.get("accumulated_angle_deg"),
            expansions=data["expansions"],
            reinsertions=data["reinsertions"],
            path=tuple((c[0], c[1]) for c in path) if path is not None else None,
        )


def path_length(path: Sequence[Cell]) -> float:
    return sum(euclid(a, b) for a, b in zip(path, path[1:]))


def accumulated_angle(path: Sequence[Cell]) -> float:
    """Sum of turn angles (degrees) over the interior waypoints of a path."""
    return sum(
        turn_angle(path[i - 1], path[i], path[i + 1]) for i in range(1, len(path) - 1)
    )


def run_instance(grid: Grid, instance: Instance, cfg: PlannerConfig) -> RunRecord:
    """Run one search and package the result; runtime covers the search only."""
    check_instance(grid, instance)
    outcome = search(grid, instance.start, instance.goal, cfg)
    length = angle = None
    path = None
    if outcome.verdict is Verdict.FOUND:
        path = tuple(outcome.path)
        length = path_length(path)
        angle = accumulated_angle(path)
    return RunRecord(
        instance_id=instance.instance_id,
        algorithm=cfg.name,
        config=cfg.to_dict(),
        verdict=outcome.verdict,
        runtime_s=outcome.stats.runtime,
        path_length=length,
        accumulated_angle_deg=angle,
        expansions=outcome.stats.expansions,
        reinsertions=outcome.stats.reinsertions,
        path=path,
    )


@dataclass
class BatchResult:
    records: list[RunRecord]
    errors: list[str]


def _run_set(
    grid: Grid, scen: ScenarioSet, cfg: PlannerConfig
) -> tuple[list[RunRecord], list[str]]:
    records: list[RunRecord] = []
    errors: list[str] = []
    for instance in scen.instances:
        try:
            records.append(run_instance(grid, instance, cfg))
        except InputError as exc:
            errors.append(f"{scen.map_id}: skipped instance: {exc}")
    return records, errors


def run_batch(
    scenarios: Iterable[ScenarioSet],
    configs: Sequence[PlannerConfig],
    maps_dir: str | Path | None = None,
    grids: Mapping[str, Grid] | None = None,
    jobs: int = 1,
    record_sink: Callable[[RunRecord], None] | None = None,
) -> BatchResult:
    """Run every (instance, config) pair; unreadable maps fail per set.

    Maps resolve from ``grids`` by map_id first, then from ``maps_dir`` (the
    map_id itself, then its basename). Records come back in deterministic
    (scenario, config, instance) order regardless of the parallelism degree.
    """
    scenario_list = list(scenarios)
    resolved: dict[str, Grid] = {}
    errors: list[str] = []
    runnable: list[ScenarioSet] = []
    for scen in scenario_list:
        grid = grids.get(scen.map_id) if grids else None
        if grid is None and maps_dir is not None:
            base = Path(maps_dir)
            for cand in (base / scen.map_id, base / Path(scen.map_id).name):
                if cand.is_file():
                    try:
                        grid = load_map(cand)
                    except ParseError as exc:
                        errors.append(f"{scen.map_id}: bad map file: {exc}")
                    break
        if grid is None:
            if not any(err.startswith(f"{scen.map_id}:") for err in errors):
                errors.append(f"{scen.map_id}: map not found")
            continue
        resolved[scen.map_id] = grid
        runnable.append(scen)

    tasks = [(scen, cfg) for scen in runnable for cfg in configs]
    records: list[RunRecord] = []

    def collect(task_records: list[RunRecord], task_errors: list[str]) -> None:
        records.extend(task_records)
        errors.extend(task_errors)
        if record_sink is not None:
            for record in task_records:
                record_sink(record)

    if jobs <= 1 or len(tasks) <= 1:
        for scen, cfg in tasks:
            collect(*_run_set(resolved[scen.map_id], scen, cfg))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_run_set, resolved[scen.map_id], scen, cfg)
                for scen, cfg in tasks
            ]
            # Consume in submission order: deterministic output, streamed
            # to the sink as each task finishes.
            for future in futures:
                collect(*future.result())
    return BatchResult(records=records, errors=errors)


@dataclass(frozen=True)
class AggregateGroup:
    """Aggregate metrics for one (algorithm, alpha_max) pair.

    Runtime and quality fields are computed only over the commonly solved
    set: instances solved by every algorithm at this angle.
    """

    algorithm: str
    alpha_max: float
    instances: int
    solved: int
    success_rate_pct: float
    only_vs_baseline_pct: float | None
    common_count: int
    common_set_id: str
    median_runtime_s: float | None
    mean_path_length: float | None
    mean_turn_angle_deg: float | None
    normalized_turn_angle: float | None


@dataclass(frozen=True)
class AggregateReport:
    baseline: str
    groups: tuple[AggregateGroup, ...]


def _common_set_id(ids: set[str]) -> str:
    digest = hashlib.sha1("\n".join(sorted(ids)).encode()).hexdigest()
    return digest[:12]


def aggregate(records: Sequence[RunRecord], baseline: str) -> AggregateReport:
    """Fold records into per-(algorithm, alpha_max) aggregate rows.

    ``only_vs_baseline_pct`` is the share of baseline-unsolved instances the
    algorithm solved. Normalized turn angle divides each group's mean by the
    baseline's mean at the smallest angle present.
    """
    if not records:
        raise InputError("no records to aggregate")
    algorithms = {r.algorithm for r in records}
    if baseline not in algorithms:
        raise InputError(f"unknown baseline label {baseline!r}")

    by_group: dict[tuple[str, float], list[RunRecord]] = {}
    for record in records:
        key = (record.algorithm, float(record.config["alpha_max"]))
        by_group.setdefault(key, []).append(record)

    alphas = sorted({alpha for _, alpha in by_group})
    common_by_alpha: dict[float, set[str]] = {}
    for alpha in alphas:
        solved_sets = [
            {r.instance_id for r in recs if r.verdict is Verdict.FOUND}
            for (algo, a), recs in by_group.items()
            if a == alpha
        ]
        common_by_alpha[alpha] = set.intersection(*solved_sets) if solved_sets else set()

    def group_stats(algo: str, alpha: float):
        recs = by_group[(algo, alpha)]
        solved = {r.instance_id for r in recs if r.verdict is Verdict.FOUND}
        common = common_by_alpha[alpha]
        on_common = [r for r in recs if r.instance_id in common and r.verdict is Verdict.FOUND]
        median_rt = statistics.median(r.runtime_s for r in on_common) if on_common else None
        mean_len = (
            statistics.fmean(r.path_length for r in on_common) if on_common else None
        )
        mean_angle = (
            statistics.fmean(r.accumulated_angle_deg for r in on_common)
            if on_common
            else None
        )
        return recs, solved, common, median_rt, mean_len, mean_angle

    baseline_alpha = min(a for (algo, a) in by_group if algo == baseline)
    _, _, _, _, _, norm_denominator = group_stats(baseline, baseline_alpha)

    groups = []
    for algo, alpha in sorted(by_group):
        recs, solved, common, median_rt, mean_len, mean_angle = group_stats(algo, alpha)
        only_pct = None
        if (baseline, alpha) in by_group:
            base_solved = {
                r.instance_id
                for r in by_group[(baseline, alpha)]
                if r.verdict is Verdict.FOUND
            }
            unsolved = {r.instance_id for r in by_group[(baseline, alpha)]} - base_solved
            if unsolved:
                only_pct = 100.0 * len(solved - base_solved) / len(unsolved)
            else:
                only_pct = 0.0
        normalized = None
        if mean_angle is not None and norm_denominator:
            normalized = mean_angle / norm_denominator
        groups.append(
            AggregateGroup(
                algorithm=algo,
                alpha_max=alpha,
                instances=len(recs),
                solved=len(solved),
                success_rate_pct=100.0 * len(solved) / len(recs),
                only_vs_baseline_pct=only_pct,
                common_count=len(common),
                common_set_id=_common_set_id(common),
                median_runtime_s=median_rt,
                mean_path_length=mean_len,
                mean_turn_angle_deg=mean_angle,
                normalized_turn_angle=normalized,
            )
        )
    return AggregateReport(baseline=baseline, groups=tuple(groups))


REPORT_COLUMNS = (
    "algorithm",
    "alpha_max",
    "instances",
    "solved",
    "success_rate_pct",
    "only_vs_baseline_pct",
    "common_count",
    "common_set_id",
    "median_runtime_s",
    "mean_path_length",
    "mean_turn_angle_deg",
    "normalized_turn_angle",
)


def emit_report(report: AggregateReport, fmt: str = "csv") -> str:
    """Serialize an aggregate report; columns/keys are fixed (REPORT_COLUMNS)."""
    if fmt == "json":
        payload = {
            "baseline": report.baseline,
            "groups": [
                {col: getattr(g, col) for col in REPORT_COLUMNS} for g in report.groups
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for g in report.groups:
            writer.writerow(
                ["" if (v := getattr(g, col)) is None else v for col in REPORT_COLUMNS]
            )
        return buf.getvalue()
    raise InputError(f"unknown report format {fmt!r}")


def write_records(records: Iterable[RunRecord], path: str | Path) -> None:
    """Append records as one JSON object per line (crash-safe streaming)."""
    with open(path, "a", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_dict()) + "\n")


def read_records(path: str | Path) -> list[RunRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(RunRecord.from_dict(json.loads(line)))
    return records

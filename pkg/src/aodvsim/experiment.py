"""Seed / attacker-count / speed sweeps and their CSV outputs."""

from __future__ import annotations

import csv
import dataclasses
import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from aodvsim.config import ScenarioConfig, dump_config
from aodvsim.metrics import PdrSummary, RunMetrics, aggregate
from aodvsim.mobility import MobilityModel
from aodvsim.simulation import Network

RUN_COLUMNS = [
    "seed", "attackers", "mode", "speed", "sent", "delivered", "dropped_no_route",
    "dropped_by_attacker", "dropped_buffer", "in_flight", "pdr",
]
SUMMARY_COLUMNS = [
    "attackers", "speed", "runs", "baseline_mean_pdr", "attacked_mean_pdr", "min_pdr", "max_pdr",
]
PLOT_COLUMNS = ["speed", "mean_pdr", "min_pdr", "max_pdr", "runs"]


@dataclass(frozen=True)
class RunRow:
    seed: int
    attackers: int
    mode: str
    speed: float
    metrics: RunMetrics

    def values(self) -> list:
        m = self.metrics
        return [
            self.seed, self.attackers, self.mode, repr(self.speed), m.sent, m.delivered,
            m.dropped_no_route, m.dropped_by_attacker, m.dropped_buffer, m.in_flight_at_end,
            repr(m.pdr),
        ]


@dataclass(frozen=True)
class CellSummary:
    attackers: int
    speed: float
    summary: PdrSummary
    rows: tuple[RunRow, ...]


@dataclass
class ExperimentResult:
    config: ScenarioConfig
    cells: list[CellSummary]
    rows: list[RunRow]


def cell_config(config: ScenarioConfig, attackers: int, speed: float | None) -> ScenarioConfig:
    """The scalar config for one sweep point. Speed 0 means static nodes."""
    cfg = dataclasses.replace(
        config, attackers=dataclasses.replace(config.attackers, count=attackers)
    )
    if speed is not None:
        if speed == 0:
            mobility = dataclasses.replace(cfg.mobility, model=MobilityModel.STATIC)
        else:
            mobility = dataclasses.replace(
                cfg.mobility, model=MobilityModel.RANDOM_WAYPOINT, v_min=speed, v_max=speed
            )
        cfg = dataclasses.replace(cfg, mobility=mobility)
    return cfg


def nominal_speed(config: ScenarioConfig) -> float:
    if config.mobility.model is MobilityModel.STATIC:
        return 0.0
    return float(config.mobility.v_max)


def _execute(task) -> RunRow:
    cfg, seed, trace_dir, tables = task
    count = cfg.attackers.count
    speed = nominal_speed(cfg)
    stem = f"{count}_{speed!r}_{seed}"
    if trace_dir is not None:
        with open(Path(trace_dir) / f"trace_{stem}.tsv", "w", newline="\n") as out:
            net = Network(cfg, seed, trace=out)
            metrics = net.run()
    else:
        net = Network(cfg, seed)
        metrics = net.run()
    if tables and trace_dir is not None:
        with open(Path(trace_dir) / f"tables_{stem}.csv", "w", newline="") as out:
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(["node_id", "destination", "next_hop", "hop_count", "dest_seq", "valid"])
            writer.writerows(net.routing_table_rows())
    mode = cfg.attackers.mode.value if count else "none"
    return RunRow(seed, count, mode, speed, metrics)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("MANET_SIM_THREADS", "1")))
    except ValueError:
        return 1


def run_experiment(
    config: ScenarioConfig,
    trace_dir=None,
    tables: bool = False,
    workers: int | None = None,
) -> ExperimentResult:
    """Run every (attacker count, speed) cell for every seed.

    Streams are keyed only by seed, so cells sharing a seed see identical
    mobility and traffic; only the attacker behaviour differs.
    """
    counts = config.sweep_attackers or (config.attackers.count,)
    speeds = config.sweep_speeds or (None,)
    cells = [cell_config(config, a, s) for a, s in itertools.product(counts, speeds)]
    tasks = [(cfg, seed, trace_dir, tables) for cfg in cells for seed in config.seeds]
    workers = workers or worker_count()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_execute, tasks))
    else:
        rows = [_execute(task) for task in tasks]

    summaries = []
    per_cell = len(config.seeds)
    for i, cfg in enumerate(cells):
        cell_rows = tuple(rows[i * per_cell:(i + 1) * per_cell])
        summaries.append(
            CellSummary(
                cfg.attackers.count,
                nominal_speed(cfg),
                aggregate([r.metrics for r in cell_rows]),
                cell_rows,
            )
        )
    return ExperimentResult(config, summaries, rows)


def _write_csv(path: Path, header: list[str], rows) -> Path:
    with open(path, "w", newline="") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def emit_results(
    result: ExperimentResult,
    out_dir,
    formats=("config", "runs", "summary", "plot"),
) -> list[Path]:
    """Write the config echo, ``runs.csv``, ``summary.csv`` and ``plotdata_<k>.csv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "config" in formats:
        path = out / "config.txt"
        path.write_text(dump_config(result.config))
        written.append(path)
    if "runs" in formats:
        written.append(_write_csv(out / "runs.csv", RUN_COLUMNS, (r.values() for r in result.rows)))
    if "summary" in formats:
        baseline = {c.speed: c.summary.mean for c in result.cells if c.attackers == 0}
        rows = []
        for c in result.cells:
            base = baseline.get(c.speed)
            rows.append([
                c.attackers, repr(c.speed), len(c.rows), "" if base is None else repr(base),
                repr(c.summary.mean), repr(c.summary.min), repr(c.summary.max),
            ])
        written.append(_write_csv(out / "summary.csv", SUMMARY_COLUMNS, rows))
    if "plot" in formats:
        by_count: dict[int, list[CellSummary]] = {}
        for c in result.cells:
            by_count.setdefault(c.attackers, []).append(c)
        for count, cells in sorted(by_count.items()):
            rows = [
                [repr(c.speed), repr(c.summary.mean), repr(c.summary.min), repr(c.summary.max), len(c.rows)]
                for c in sorted(cells, key=lambda c: c.speed)
            ]
            written.append(_write_csv(out / f"plotdata_{count}.csv", PLOT_COLUMNS, rows))
    return written

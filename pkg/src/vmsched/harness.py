"""Training sweeps, the steady-phase comparison, and their CSV output."""
from __future__ import annotations

import copy
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, TextIO, Union

from .engine import NodeConfig, ScenarioConfig, SimulationReport, run_simulation
from .errors import ConfigError
from .metrics import RateSummary
from .overhead import OverheadMode, OverheadModel, default_contention_table
from .policy import PolicyConfig, PolicyKind
from .workload import WorkloadConfig

TRAINING_HOURS = 10_000.0
STEADY_HOURS = 100_000.0
DEFAULT_SEEDS = (1, 2, 3)
STATIC_OVERHEAD = 0.10

RESOURCE_RATIOS = (1.0, 1.5, 2.0, 3.0)
ALPHAS = (0.01, 0.05, 0.1)
DELTAS = (0.05, 0.1, 0.2)
X_THRESHOLDS = (0.3, 0.4, 0.5, 0.6, 0.7)

CSV_HEADER = (
    "scenario,seed,param_r,param_alpha,param_delta,param_theta,jobs_total,on_time,late,"
    "terminated,global_success,deadline_success,deadline_miss,cpu_util,mem_util,wasted_core_hours"
)
TRACE_HEADER = "clock,f_measured,theta"


class SweepKind(str, Enum):
    RESOURCE_RATIO = "resource_ratio"
    ALPHA_DELTA = "alpha_delta"
    X_THRESHOLD = "x_threshold"
    STEADY = "steady"


@dataclass
class GridPoint:
    label: str
    bindings: dict[str, Any]


@dataclass
class SweepSpec:
    kind: SweepKind
    grid: list[GridPoint]
    base: ScenarioConfig
    replicate_seeds: tuple[int, ...] = DEFAULT_SEEDS

    def validate(self) -> None:
        if not self.grid:
            raise ConfigError("sweep grid is empty")
        if not self.replicate_seeds:
            raise ConfigError("sweep needs at least one seed")
        if len(set(self.replicate_seeds)) != len(self.replicate_seeds):
            raise ConfigError("replicate seeds must be distinct")


@dataclass
class SweepRow:
    grid_index: int
    scenario: str
    seed: int
    config: ScenarioConfig
    report: SimulationReport

    @property
    def summary(self) -> RateSummary:
        return self.report.summary


def bind(base: ScenarioConfig, bindings: dict[str, Any], name: Optional[str] = None) -> ScenarioConfig:
    """Copy of ``base`` with dotted attribute paths overridden.

    ``{"policy.alpha": 0.01, "node": NodeConfig(4, 6.0)}``
    """
    config = copy.deepcopy(base)
    for path, value in bindings.items():
        *parents, leaf = path.split(".")
        target = config
        for part in parents:
            target = getattr(target, part)
        if not hasattr(target, leaf):
            raise ConfigError(f"unknown scenario parameter {path!r}")
        try:
            object.__setattr__(target, leaf, copy.deepcopy(value))
        except AttributeError as exc:
            raise ConfigError(f"cannot bind {path!r}: {exc}") from None
    if name is not None:
        config.name = name
    return config


def training_base(total_hours: float = TRAINING_HOURS) -> ScenarioConfig:
    """Dynamic overhead with the adaptive policy at its trained defaults."""
    return ScenarioConfig(
        name="training",
        workload=WorkloadConfig(total_hours=total_hours),
        overhead=OverheadModel.dynamic(),
        policy=PolicyConfig(kind=PolicyKind.ADAPTIVE, theta_init=0.6, delta=0.1, alpha=0.05),
    )


def _fmt(value: float) -> str:
    return f"{value:g}"


def resource_ratio_grid(base: ScenarioConfig, ratios: Sequence[float] = RESOURCE_RATIOS) -> list[GridPoint]:
    grid = []
    for i, ratio in enumerate(ratios, start=1):
        node = NodeConfig.from_ratio(ratio, base.node.cpu_cores)
        bindings: dict[str, Any] = {"node": node}
        if base.overhead.mode is OverheadMode.DYNAMIC:
            # memory pressure is relative to the node's memory
            bindings["overhead.contention_table"] = default_contention_table(node.memory)
        grid.append(GridPoint(f"res_{i}", bindings))
    return grid


def alpha_delta_grid(alphas: Sequence[float] = ALPHAS, deltas: Sequence[float] = DELTAS) -> list[GridPoint]:
    grid = [GridPoint(f"alpha_{i}", {"policy.alpha": a, "policy.delta": 0.1}) for i, a in enumerate(alphas, 1)]
    grid += [GridPoint(f"delta_{i}", {"policy.alpha": 0.01, "policy.delta": d}) for i, d in enumerate(deltas, 1)]
    return grid


def x_threshold_grid(thetas: Sequence[float] = X_THRESHOLDS) -> list[GridPoint]:
    return [
        GridPoint(f"x_{_fmt(t)}", {"policy.theta_init": t, "policy.alpha": 0.05, "policy.delta": 0.1})
        for t in thetas
    ]


def steady_configs(seed: int = 1, total_hours: float = STEADY_HOURS, static_overhead: float = STATIC_OVERHEAD) -> list[ScenarioConfig]:
    """alg_1 .. alg_5: physical, static virtual, dynamic, dynamic+adaptive, dynamic+statistical."""
    workload = WorkloadConfig(total_hours=total_hours)
    node = NodeConfig(4, 8.0)
    dynamic = OverheadModel.dynamic(memory_gb=node.memory)
    specs = [
        ("alg_1", OverheadModel.off(), PolicyConfig(kind=PolicyKind.NONE)),
        ("alg_2", OverheadModel.static(static_overhead), PolicyConfig(kind=PolicyKind.NONE)),
        ("alg_3", dynamic, PolicyConfig(kind=PolicyKind.NONE)),
        ("alg_4", dynamic, PolicyConfig(kind=PolicyKind.ADAPTIVE)),
        ("alg_5", dynamic, PolicyConfig(kind=PolicyKind.STATISTICAL)),
    ]
    return [
        ScenarioConfig(
            name=name,
            seed=seed,
            node=node,
            workload=copy.deepcopy(workload),
            overhead=copy.deepcopy(overhead),
            policy=policy,
        )
        for name, overhead, policy in specs
    ]


def steady_grid() -> list[GridPoint]:
    return [
        GridPoint(cfg.name, {"overhead": cfg.overhead, "policy": cfg.policy})
        for cfg in steady_configs()
    ]


def make_sweep(
    kind: SweepKind | str,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    total_hours: Optional[float] = None,
) -> SweepSpec:
    kind = SweepKind(kind)
    if kind is SweepKind.STEADY:
        base = steady_configs(total_hours=total_hours or STEADY_HOURS)[0]
        base.name = "steady"
        grid = steady_grid()
    else:
        base = training_base(total_hours or TRAINING_HOURS)
        grid = {
            SweepKind.RESOURCE_RATIO: lambda: resource_ratio_grid(base),
            SweepKind.ALPHA_DELTA: alpha_delta_grid,
            SweepKind.X_THRESHOLD: x_threshold_grid,
        }[kind]()
    return SweepSpec(kind, grid, base, tuple(seeds))


def _run_one(config: ScenarioConfig) -> SimulationReport:
    return run_simulation(config)


def expand(spec: SweepSpec) -> list[tuple[int, ScenarioConfig]]:
    """Every (grid index, scenario) pair in output order, validated up front."""
    spec.validate()
    jobs = []
    for index, point in enumerate(spec.grid):
        for seed in spec.replicate_seeds:
            try:
                config = bind(spec.base, dict(point.bindings), name=point.label)
                config.seed = seed
                config.validate()
            except (ConfigError, ValueError) as exc:
                raise ConfigError(f"grid point {point.label!r}: {exc}") from exc
            jobs.append((index, config))
    return jobs


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Run every grid point for every seed; rows ordered by (grid index, seed)."""
    jobs = expand(spec)
    configs = [cfg for _, cfg in jobs]
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_one, configs))
    else:
        reports = [_run_one(cfg) for cfg in configs]
    return [
        SweepRow(index, cfg.name, cfg.seed, cfg, report)
        for (index, cfg), report in zip(jobs, reports)
    ]


def _rate(value: Optional[float]) -> str:
    return "NA" if value is None else f"{value:.4f}"


def _params(config: ScenarioConfig) -> tuple[str, str, str]:
    pol = config.policy
    if pol.kind is PolicyKind.NONE:
        return "", "", ""
    alpha = _rate(pol.alpha)
    delta = _rate(pol.delta) if pol.kind is PolicyKind.ADAPTIVE else ""
    return alpha, delta, _rate(pol.theta_init)


def csv_line(row: SweepRow | SimulationReport) -> str:
    report = row.report if isinstance(row, SweepRow) else row
    config, s = report.config, report.summary
    alpha, delta, theta = _params(config)
    fields = [
        config.name,
        str(config.seed),
        _rate(config.node.ratio),
        alpha,
        delta,
        theta,
        str(s.jobs_total),
        str(s.on_time),
        str(s.late),
        str(s.terminated),
        _rate(s.global_success_rate),
        _rate(s.deadline_success_rate),
        _rate(s.deadline_miss_rate),
        _rate(s.cpu_utilization),
        _rate(s.memory_utilization),
        f"{s.wasted_core_hours:.4f}",
    ]
    return ",".join(fields)


Destination = Union[str, os.PathLike, TextIO]


def _write(text: str, destination: Destination) -> None:
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def csv_text(table: Iterable[SweepRow | SimulationReport]) -> str:
    lines = [CSV_HEADER] + [csv_line(row) for row in table]
    return "\n".join(lines) + "\n"


def emit_csv(table: Iterable[SweepRow | SimulationReport], destination: Destination) -> None:
    _write(csv_text(table), destination)


def trace_text(report: SimulationReport) -> str:
    lines = [TRACE_HEADER]
    lines += [f"{clock:.4f},{f:.6f},{theta:.4f}" for clock, f, theta in report.trace]
    return "\n".join(lines) + "\n"


def emit_failure_trace(report: SimulationReport, destination: Destination) -> None:
    _write(trace_text(report), destination)


@dataclass
class Aggregate:
    scenario: str
    seeds: int
    mean: dict[str, float] = field(default_factory=dict)
    low: dict[str, float] = field(default_factory=dict)
    high: dict[str, float] = field(default_factory=dict)


_AGG_FIELDS = ("global_success_rate", "deadline_success_rate", "deadline_miss_rate", "termination_rate", "cpu_utilization")


def aggregate(rows: Sequence[SweepRow]) -> list[Aggregate]:
    """Mean and range over seeds, one entry per grid point."""
    groups: dict[int, list[SweepRow]] = {}
    for row in rows:
        groups.setdefault(row.grid_index, []).append(row)
    out = []
    for index in sorted(groups):
        members = groups[index]
        agg = Aggregate(members[0].scenario, len(members))
        for name in _AGG_FIELDS:
            values = [getattr(r.summary, name) for r in members if getattr(r.summary, name) is not None]
            if values:
                agg.mean[name] = sum(values) / len(values)
                agg.low[name] = min(values)
                agg.high[name] = max(values)
        out.append(agg)
    return out


def format_report(rows: Sequence[SweepRow], title: str = "") -> str:
    buf = io.StringIO()
    if title:
        buf.write(f"{title}\n")
    buf.write(f"{'scenario':<12} {'seeds':>5} {'global':>16} {'deadline ok':>16} {'miss':>16} {'cpu':>8}\n")
    for agg in aggregate(rows):
        cells = []
        for name in ("global_success_rate", "deadline_success_rate", "deadline_miss_rate"):
            if name in agg.mean:
                half = (agg.high[name] - agg.low[name]) / 2
                cells.append(f"{agg.mean[name]:.3f} ± {half:.3f}")
            else:
                cells.append("NA")
        cpu = agg.mean.get("cpu_utilization")
        buf.write(
            f"{agg.scenario:<12} {agg.seeds:>5} {cells[0]:>16} {cells[1]:>16} {cells[2]:>16} "
            f"{'NA' if cpu is None else format(cpu, '.3f'):>8}\n"
        )
    return buf.getvalue()

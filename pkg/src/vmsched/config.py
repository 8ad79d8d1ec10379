"""Scenario files: TOML with [scenario], [node], [clock], [workload], [overhead], [policy]."""
from __future__ import annotations

import copy
import dataclasses
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .engine import MissDefinition, NodeConfig, ScenarioConfig
from .errors import ConfigError
from .overhead import CLASS_ORDER, OverheadMode, OverheadModel, SlotClock, default_contention_table
from .policy import PolicyConfig, PolicyKind
from .workload import DEFAULT_CLASSES, ClassName, JobClass, WorkloadConfig

_SECTIONS = {"scenario", "node", "clock", "workload", "overhead", "policy"}


def _take(section: Mapping[str, Any], name: str, allowed: set[str]) -> dict:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"[{name}] unknown keys: {', '.join(sorted(unknown))}")
    return dict(section)


def _num(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _job_class(row: Mapping[str, Any]) -> JobClass:
    row = _take(row, "workload.classes", {"name", "duration_min", "duration_max", "cpu_demand", "mem_demand", "mix_weight"})
    try:
        name = ClassName(row["name"])
        return JobClass(
            name,
            (_num(row["duration_min"], "duration_min"), _num(row["duration_max"], "duration_max")),
            int(row.get("cpu_demand", 1)),
            _num(row["mem_demand"], "mem_demand"),
            _num(row["mix_weight"], "mix_weight"),
        )
    except KeyError as exc:
        raise ConfigError(f"[[workload.classes]] missing key {exc}") from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[[workload.classes]] {exc}") from None


def _overhead(section: Mapping[str, Any], memory_gb: float) -> OverheadModel:
    section = _take(section, "overhead", {"mode", "base", "default_table", "contention"})
    try:
        mode = OverheadMode(section.get("mode", "off"))
    except ValueError:
        raise ConfigError(f"[overhead] unknown mode {section.get('mode')!r}") from None
    base = _num(section.get("base", 0.0), "overhead.base")
    table = default_contention_table(memory_gb) if section.get("default_table", mode is OverheadMode.DYNAMIC) else {}
    for row in section.get("contention", []):
        row = _take(row, "overhead.contention", {c.value for c in CLASS_ORDER} | {"extra"})
        if "extra" not in row:
            raise ConfigError("[[overhead.contention]] row needs an 'extra' value")
        key = tuple(int(row.get(c.value, 0)) for c in CLASS_ORDER)
        table[key] = _num(row["extra"], "overhead.contention.extra")
    return OverheadModel(mode, base, table)


def scenario_from_dict(data: Mapping[str, Any]) -> ScenarioConfig:
    unknown = set(data) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown sections: {', '.join(sorted(unknown))}")
    scen = _take(data.get("scenario", {}), "scenario", {"name", "seed", "miss_definition", "hard_deadline"})
    node = _take(data.get("node", {}), "node", {"cpu_cores", "memory_gb"})
    clock = _take(data.get("clock", {}), "clock", {"tick_hours"})
    wl = _take(data.get("workload", {}), "workload", {"buffer_fraction", "total_hours", "classes"})
    pol = _take(data.get("policy", {}), "policy", {f.name for f in dataclasses.fields(PolicyConfig)})

    classes = tuple(_job_class(row) for row in wl["classes"]) if "classes" in wl else DEFAULT_CLASSES
    try:
        miss_definition = MissDefinition(scen.get("miss_definition", "both"))
        if "kind" in pol:
            pol["kind"] = PolicyKind(pol["kind"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    config = ScenarioConfig(
        name=str(scen.get("name", "scenario")),
        seed=int(scen.get("seed", 0)),
        node=NodeConfig(int(node.get("cpu_cores", 4)), _num(node.get("memory_gb", 8.0), "node.memory_gb")),
        workload=WorkloadConfig(
            classes=classes,
            buffer_fraction=_num(wl.get("buffer_fraction", 0.05), "workload.buffer_fraction"),
            total_hours=_num(wl.get("total_hours", 10_000.0), "workload.total_hours"),
        ),
        overhead=_overhead(data.get("overhead", {}), _num(node.get("memory_gb", 8.0), "node.memory_gb")),
        policy=PolicyConfig(**pol),
        clock=SlotClock(_num(clock.get("tick_hours", 0.1), "clock.tick_hours")),
        miss_definition=miss_definition,
        hard_deadline=bool(scen.get("hard_deadline", True)),
    )
    config.validate()
    return config


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        return scenario_from_dict(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def default_scenario_text() -> str:
    return resources.files("vmsched").joinpath("data/default_scenario.toml").read_text()


def default_scenario() -> ScenarioConfig:
    return scenario_from_dict(tomllib.loads(default_scenario_text()))


def replace(config: ScenarioConfig, **changes: Any) -> ScenarioConfig:
    """Deep-copied scenario with top-level fields swapped out."""
    new = copy.deepcopy(config)
    for key, value in changes.items():
        if not hasattr(new, key):
            raise ConfigError(f"ScenarioConfig has no field {key!r}")
        setattr(new, key, value)
    return new

"""Virtualization overhead, virtual execution time and slot booking."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .errors import ConfigError, ContractViolation
from .workload import ClassName

CLASS_ORDER: tuple[ClassName, ...] = tuple(ClassName)

# (event generation, simulation, reconstruction) running counts
MixKey = tuple[int, int, int]


class OverheadMode(str, Enum):
    OFF = "off"
    STATIC = "static"
    DYNAMIC = "dynamic"


def mix_key(counts: Mapping[ClassName | str, int]) -> MixKey:
    """Normalize a per-class count mapping into a table key."""
    key = tuple(int(counts.get(c, counts.get(c.value, 0))) for c in CLASS_ORDER)
    if any(n < 0 for n in key):
        raise ContractViolation(f"negative running count in {dict(counts)}")
    return key  # type: ignore[return-value]


# (fraction of node memory in use, extra overhead); highest matching row wins
MEMORY_PRESSURE_STEPS: tuple[tuple[float, float], ...] = (
    (0.6875, 0.02),
    (0.75, 0.045),
    (0.8125, 0.6),
    (0.875, 1.0),
    (1.0, 1.5),
)
IO_PAIR_LIMIT = 4
IO_PAIR_EXTRA = 0.15


def contention_extra(
    mix: MixKey,
    memory_gb: float = 8.0,
    mem_demands: tuple[float, float, float] = (0.5, 1.0, 2.0),
) -> float:
    """Synthetic extra overhead for one running mix.

    Two effects: memory pressure, which stays below the 5% deadline buffer
    until the guests use more than ~80% of node memory and then thrashes;
    and I/O interference between event generation (output heavy) and
    reconstruction (input heavy) once they form four or more pairs.
    """
    used = sum(n * m for n, m in zip(mix, mem_demands))
    extra = 0.0
    for fraction, value in MEMORY_PRESSURE_STEPS:
        if used >= fraction * memory_gb - 1e-9:
            extra = value
    n_eg, _, n_reco = mix
    if n_eg * n_reco >= IO_PAIR_LIMIT:
        extra += IO_PAIR_EXTRA
    return extra


def default_contention_table(memory_gb: float = 8.0, max_jobs: int = 8) -> dict[MixKey, float]:
    """Contention table over every mix of up to ``max_jobs`` running jobs."""
    table: dict[MixKey, float] = {}
    for n_eg in range(max_jobs + 1):
        for n_sim in range(max_jobs + 1 - n_eg):
            for n_reco in range(max_jobs + 1 - n_eg - n_sim):
                key = (n_eg, n_sim, n_reco)
                extra = contention_extra(key, memory_gb)
                if extra > 0:
                    table[key] = extra
    return table


@dataclass
class OverheadModel:
    mode: OverheadMode = OverheadMode.OFF
    base: float = 0.0
    contention_table: dict[MixKey, float] = field(default_factory=dict)

    def __post_init__(self):
        self.mode = OverheadMode(self.mode)
        self.validate()

    def validate(self) -> None:
        if not (self.base >= 0 and math.isfinite(self.base)):
            raise ConfigError(f"overhead base coefficient must be >= 0, got {self.base}")
        for key, extra in self.contention_table.items():
            if len(key) != len(CLASS_ORDER) or any(n < 0 for n in key):
                raise ConfigError(f"bad contention table key {key}")
            if not (extra >= 0 and math.isfinite(extra)):
                raise ConfigError(f"contention table entry {key} must be >= 0, got {extra}")

    @classmethod
    def off(cls) -> "OverheadModel":
        return cls(OverheadMode.OFF)

    @classmethod
    def static(cls, base: float) -> "OverheadModel":
        return cls(OverheadMode.STATIC, base)

    @classmethod
    def dynamic(
        cls, base: float = 0.0, table: dict[MixKey, float] | None = None, memory_gb: float = 8.0
    ) -> "OverheadModel":
        if table is None:
            table = default_contention_table(memory_gb)
        return cls(OverheadMode.DYNAMIC, base, dict(table))


@dataclass(frozen=True)
class SlotClock:
    tick: float = 0.1  # hours

    def __post_init__(self):
        if not (self.tick > 0 and math.isfinite(self.tick)):
            raise ConfigError(f"tick must be finite and > 0, got {self.tick}")


def effective_overhead(model: OverheadModel, running_mix: Mapping[ClassName | str, int] | MixKey) -> float:
    if model.mode is OverheadMode.OFF:
        return 0.0
    if model.mode is OverheadMode.STATIC:
        return model.base
    key = tuple(running_mix) if isinstance(running_mix, tuple) else mix_key(running_mix)
    return model.base + model.contention_table.get(key, 0.0)


def virtual_exec_time(duration: float, overhead: float) -> float:
    """Wall time a job of physical duration ``duration`` needs inside a VM."""
    if not duration > 0:
        raise ContractViolation(f"duration must be > 0, got {duration}")
    if overhead < 0:
        raise ContractViolation(f"overhead must be >= 0, got {overhead}")
    return duration * overhead + duration


def slots_required(virtual_time: float, clock: SlotClock | float) -> int:
    tick = clock.tick if isinstance(clock, SlotClock) else clock
    if not tick > 0:
        raise ConfigError(f"tick must be > 0, got {tick}")
    if not virtual_time > 0:
        raise ContractViolation(f"virtual time must be > 0, got {virtual_time}")
    ratio = virtual_time / tick
    # guard 10/0.1 -> 100.00000000000001 style rounding noise
    nearest = round(ratio)
    if abs(ratio - nearest) < 1e-9 * max(1.0, ratio):
        return max(1, int(nearest))
    return max(1, math.ceil(ratio))

"""Synthetic ATLAS-like job streams.

Jobs come in three classes (event generation, simulation, reconstruction)
with different duration ranges and memory footprints. All jobs sit in a
single FIFO queue at t=0; the deadline of each job is a window measured
from the moment the node starts it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigError


class ClassName(str, Enum):
    EVENT_GENERATION = "EventGeneration"
    SIMULATION = "Simulation"
    RECONSTRUCTION = "Reconstruction"


@dataclass(frozen=True)
class JobClass:
    name: ClassName
    duration_range: tuple[float, float]  # hours
    cpu_demand: int = 1
    mem_demand: float = 1.0  # GB
    mix_weight: float = 1.0

    def __post_init__(self):
        lo, hi = self.duration_range
        if not (lo > 0 and lo <= hi):
            raise ConfigError(f"{self.name.value}: bad duration range {self.duration_range}")
        if int(self.cpu_demand) != self.cpu_demand or self.cpu_demand < 1:
            raise ConfigError(f"{self.name.value}: cpu_demand must be an integer >= 1")
        if not self.mem_demand > 0:
            raise ConfigError(f"{self.name.value}: mem_demand must be > 0")
        if not (self.mix_weight >= 0 and math.isfinite(self.mix_weight)):
            raise ConfigError(f"{self.name.value}: mix_weight must be finite and >= 0")


DEFAULT_CLASSES: tuple[JobClass, ...] = (
    JobClass(ClassName.EVENT_GENERATION, (1.0, 6.0), 1, 0.5, 0.4),
    JobClass(ClassName.SIMULATION, (6.0, 12.0), 1, 1.0, 0.4),
    JobClass(ClassName.RECONSTRUCTION, (12.0, 24.0), 1, 2.0, 0.2),
)


@dataclass(frozen=True)
class JobSpec:
    id: int
    job_class: JobClass
    duration: float  # physical execution time e_T, hours
    deadline: float  # absolute, same clock as submit_time
    submit_time: float = 0.0

    def __post_init__(self):
        if not self.duration > 0:
            raise ConfigError(f"job {self.id}: duration must be > 0")
        # small slack for float rounding of submit + e_T * (1 + b)
        if self.duration > self.deadline - self.submit_time + 1e-9 * max(1.0, self.deadline):
            raise ConfigError(f"job {self.id}: duration exceeds its deadline window")

    @property
    def cpu_demand(self) -> int:
        return self.job_class.cpu_demand

    @property
    def mem_demand(self) -> float:
        return self.job_class.mem_demand

    @property
    def deadline_window(self) -> float:
        return self.deadline - self.submit_time


@dataclass
class WorkloadConfig:
    classes: tuple[JobClass, ...] = DEFAULT_CLASSES
    buffer_fraction: float = 0.05
    total_hours: float = 10_000.0

    def validate(self) -> None:
        if not self.classes:
            raise ConfigError("workload needs at least one job class")
        names = [c.name for c in self.classes]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate job class names")
        total = sum(c.mix_weight for c in self.classes)
        if not (total > 0 and math.isfinite(total)):
            raise ConfigError("job class weights cannot be normalized")
        if abs(total - 1.0) > 1e-9:
            raise ConfigError(f"job class weights sum to {total}, expected 1")
        if self.buffer_fraction < 0:
            raise ConfigError("buffer_fraction must be >= 0")
        if not self.total_hours > 0:
            raise ConfigError("total_hours must be > 0")

    def class_by_name(self, name: ClassName | str) -> JobClass:
        name = ClassName(name)
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)


def assign_deadline(duration: float, buffer_fraction: float, submit_time: float = 0.0) -> float:
    """Absolute deadline: the job gets its duration plus a proportional buffer."""
    if not duration > 0:
        raise ConfigError("duration must be > 0")
    if buffer_fraction < 0:
        raise ConfigError("buffer_fraction must be >= 0")
    return submit_time + duration * (1.0 + buffer_fraction)


def generate_workload(config: WorkloadConfig, seed: int, total_hours: float | None = None) -> list[JobSpec]:
    """Draw jobs until their summed duration first reaches ``total_hours``.

    Class is drawn by mix weight, duration uniformly within the class range.
    The same (config, seed) always yields the same list.
    """
    config.validate()
    if total_hours is None:
        total_hours = config.total_hours
    if not total_hours > 0:
        raise ConfigError("total_hours must be > 0")

    rng = np.random.default_rng(seed)
    weights = np.array([c.mix_weight for c in config.classes], dtype=float)
    cum = np.cumsum(weights / weights.sum())
    jobs: list[JobSpec] = []
    accumulated = 0.0
    while accumulated < total_hours:
        k = min(int(np.searchsorted(cum, rng.random(), side="right")), len(cum) - 1)
        cls = config.classes[k]
        lo, hi = cls.duration_range
        duration = float(rng.uniform(lo, hi)) if hi > lo else float(lo)
        jobs.append(
            JobSpec(
                id=len(jobs),
                job_class=cls,
                duration=duration,
                deadline=assign_deadline(duration, config.buffer_fraction, 0.0),
                submit_time=0.0,
            )
        )
        accumulated += duration
    return jobs

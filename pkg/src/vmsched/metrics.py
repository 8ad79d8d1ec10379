"""Outcome rates and resource utilization for one simulation run."""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional

from .errors import ContractViolation

if TYPE_CHECKING:
    from .engine import JobRuntime


@dataclass
class UtilizationLedger:
    busy_core_hours: float = 0.0
    idle_core_hours: float = 0.0
    busy_gb_hours: float = 0.0
    idle_gb_hours: float = 0.0
    # core-hours burnt by jobs that ended terminated or late
    wasted_core_hours: float = 0.0
    peak_cores: float = 0.0
    peak_memory: float = 0.0

    def record_tick(self, cores: float, memory: float, busy_cores: float, busy_gb: float, dt: float) -> None:
        self.busy_core_hours += busy_cores
        self.idle_core_hours += cores * dt - busy_cores
        self.busy_gb_hours += busy_gb
        self.idle_gb_hours += memory * dt - busy_gb

    @property
    def cpu_utilization(self) -> Optional[float]:
        total = self.busy_core_hours + self.idle_core_hours
        return self.busy_core_hours / total if total > 0 else None

    @property
    def memory_utilization(self) -> Optional[float]:
        total = self.busy_gb_hours + self.idle_gb_hours
        return self.busy_gb_hours / total if total > 0 else None


@dataclass(frozen=True)
class RateSummary:
    jobs_total: int
    on_time: int
    late: int
    terminated: int
    # None marks an undefined rate (no finished jobs)
    global_success_rate: Optional[float]
    deadline_success_rate: Optional[float]
    deadline_miss_rate: Optional[float]
    termination_rate: Optional[float]
    cpu_utilization: Optional[float]
    memory_utilization: Optional[float]
    wasted_core_hours: float


def summarize(finished: Iterable["JobRuntime"], ledger: UtilizationLedger) -> RateSummary:
    from .engine import JobStatus

    on_time = late = terminated = 0
    for job in finished:
        if job.status is JobStatus.COMPLETED_ON_TIME:
            on_time += 1
        elif job.status is JobStatus.COMPLETED_LATE:
            late += 1
        elif job.status is JobStatus.TERMINATED:
            terminated += 1
        else:
            raise ContractViolation(f"job {job.spec.id} has non-terminal status {job.status}")
    total = on_time + late + terminated
    if total:
        rates = ((on_time + late) / total, on_time / total, (late + terminated) / total, terminated / total)
    else:
        rates = (None, None, None, None)
    return RateSummary(
        total,
        on_time,
        late,
        terminated,
        *rates,
        cpu_utilization=ledger.cpu_utilization,
        memory_utilization=ledger.memory_utilization,
        wasted_core_hours=ledger.wasted_core_hours,
    )

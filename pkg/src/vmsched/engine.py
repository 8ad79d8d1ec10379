"""Tick-driven simulation of one virtualized worker node."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import ConfigError
from .metrics import RateSummary, UtilizationLedger, summarize
from .overhead import CLASS_ORDER, OverheadModel, SlotClock, effective_overhead, slots_required, virtual_exec_time
from .policy import Decision, PolicyConfig, PolicyKind, PolicyState, compute_x
from .workload import JobSpec, WorkloadConfig, generate_workload

_EPS = 1e-9


class JobStatus(str, Enum):
    QUEUED = "queued"
    RUNNING = "running"
    COMPLETED_ON_TIME = "completed_on_time"
    COMPLETED_LATE = "completed_late"
    TERMINATED = "terminated"


class MissDefinition(str, Enum):
    """Which outcomes count as failures for the failure-rate estimator."""

    BOTH = "both"  # late completions, deadline kills and policy terminations
    LATE = "late"  # only jobs that ran into their deadline; policy kills are not fed


@dataclass(frozen=True)
class NodeConfig:
    cpu_cores: int = 4
    memory: float = 8.0  # GB

    def __post_init__(self):
        if int(self.cpu_cores) != self.cpu_cores or self.cpu_cores < 1:
            raise ConfigError(f"cpu_cores must be an integer >= 1, got {self.cpu_cores}")
        if not (self.memory > 0 and math.isfinite(self.memory)):
            raise ConfigError(f"memory must be > 0, got {self.memory}")

    @property
    def ratio(self) -> float:
        return self.memory / self.cpu_cores

    @classmethod
    def from_ratio(cls, ratio: float, cpu_cores: int = 4) -> "NodeConfig":
        return cls(cpu_cores, ratio * cpu_cores)


@dataclass
class ScenarioConfig:
    name: str = "scenario"
    seed: int = 0
    node: NodeConfig = field(default_factory=NodeConfig)
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)
    overhead: OverheadModel = field(default_factory=OverheadModel)
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    clock: SlotClock = field(default_factory=SlotClock)
    miss_definition: MissDefinition = MissDefinition.BOTH
    # batch system kills a job the moment its deadline passes
    hard_deadline: bool = True

    def validate(self) -> None:
        self.miss_definition = MissDefinition(self.miss_definition)
        self.workload.validate()
        self.overhead.validate()
        self.policy.validate()
        for cls in self.workload.classes:
            if cls.cpu_demand > self.node.cpu_cores or cls.mem_demand > self.node.memory:
                raise ConfigError(f"job class {cls.name.value} can never fit on the node")


@dataclass(eq=False)
class JobRuntime:
    spec: JobSpec
    start_time: float
    deadline: float  # absolute, rebased to start_time
    booked_slots: int
    work_done: float = 0.0
    status: JobStatus = JobStatus.RUNNING
    first_x: Optional[float] = None
    end_time: Optional[float] = None
    terminated_by: Optional[str] = None  # "policy" or "deadline"

    @property
    def remaining_physical(self) -> float:
        return max(self.spec.duration - self.work_done, 0.0)


@dataclass
class SimulationState:
    config: ScenarioConfig
    queue: deque
    policy: PolicyState
    tick_index: int = 0
    running: list = field(default_factory=list)
    finished: list = field(default_factory=list)
    ledger: UtilizationLedger = field(default_factory=UtilizationLedger)
    used_cores: int = 0
    used_memory: float = 0.0
    mix: list = field(default_factory=lambda: [0] * len(CLASS_ORDER))
    trace: list = field(default_factory=list)  # (clock, f, theta)

    @property
    def clock(self) -> float:
        return self.tick_index * self.config.clock.tick

    @property
    def done(self) -> bool:
        return not self.queue and not self.running

    def current_overhead(self) -> float:
        return effective_overhead(self.config.overhead, tuple(self.mix))


def new_state(config: ScenarioConfig, jobs: list[JobSpec]) -> SimulationState:
    return SimulationState(config=config, queue=deque(jobs), policy=PolicyState(config.policy))


def admit(state: SimulationState, job: JobSpec) -> bool:
    """Start ``job`` if the node has the cores and memory for it."""
    node = state.config.node
    if state.used_cores + job.cpu_demand > node.cpu_cores:
        return False
    if state.used_memory + job.mem_demand > node.memory + _EPS:
        return False
    if state.queue and state.queue[0] is job:
        state.queue.popleft()
    now = state.clock
    state.used_cores += job.cpu_demand
    state.used_memory += job.mem_demand
    state.mix[CLASS_ORDER.index(job.job_class.name)] += 1
    overhead = state.current_overhead()
    state.running.append(
        JobRuntime(
            spec=job,
            start_time=now,
            deadline=now + job.deadline_window,
            booked_slots=slots_required(virtual_exec_time(job.duration, overhead), state.config.clock),
        )
    )
    state.ledger.peak_cores = max(state.ledger.peak_cores, state.used_cores)
    state.ledger.peak_memory = max(state.ledger.peak_memory, state.used_memory)
    return True


def admit_from_queue(state: SimulationState) -> int:
    n = 0
    while state.queue and admit(state, state.queue[0]):
        n += 1
    return n


def project_miss(job: JobRuntime, overhead: float, clock: float) -> bool:
    remaining_virtual = job.remaining_physical * (1.0 + overhead)
    return remaining_virtual > job.deadline - clock


def _release(state: SimulationState, job: JobRuntime) -> None:
    state.used_cores -= job.spec.cpu_demand
    state.used_memory -= job.spec.mem_demand
    if abs(state.used_memory) < _EPS:
        state.used_memory = 0.0
    state.mix[CLASS_ORDER.index(job.spec.job_class.name)] -= 1


def step(state: SimulationState) -> SimulationState:
    cfg = state.config
    tick = cfg.clock.tick
    t0 = state.clock
    t1 = (state.tick_index + 1) * tick
    overhead = state.current_overhead()
    slowdown = 1.0 + overhead

    busy_cores = busy_gb = 0.0
    ended: list[JobRuntime] = []
    survivors: list[JobRuntime] = []
    for job in state.running:
        need = (job.spec.duration - job.work_done) * slowdown
        finish_at = t0 + need
        if cfg.hard_deadline and job.deadline <= t1 and job.deadline < finish_at - _EPS:
            occupied = max(job.deadline - t0, 0.0)
            job.work_done += occupied / slowdown
            job.status = JobStatus.TERMINATED
            job.terminated_by = "deadline"
            job.end_time = job.deadline
            ended.append(job)
        elif need <= tick + _EPS:
            occupied = need
            job.work_done = job.spec.duration
            job.end_time = finish_at
            on_time = finish_at <= job.deadline + _EPS
            job.status = JobStatus.COMPLETED_ON_TIME if on_time else JobStatus.COMPLETED_LATE
            ended.append(job)
        else:
            occupied = tick
            job.work_done += tick / slowdown
            survivors.append(job)
        busy_cores += job.spec.cpu_demand * occupied
        busy_gb += job.spec.mem_demand * occupied

    for job in ended:
        _release(state, job)

    policy = state.policy
    if survivors:
        overhead_now = state.current_overhead()
        kept = []
        for job in survivors:
            ttd = job.deadline - t1
            remaining_virtual = job.remaining_physical * (1.0 + overhead_now)
            terminate = False
            if ttd <= 0:
                # only reachable without a hard deadline: already late
                terminate = policy.active
            elif remaining_virtual > ttd:
                x = compute_x(remaining_virtual, ttd)
                if job.first_x is None:
                    job.first_x = x
                terminate = policy.decide(x) is Decision.TERMINATE
            if terminate:
                job.status = JobStatus.TERMINATED
                job.terminated_by = "policy"
                job.end_time = t1
                _release(state, job)
                ended.append(job)
            else:
                kept.append(job)
        survivors = kept
    state.running = survivors

    ended.sort(key=lambda j: (j.end_time, j.spec.id))
    for job in ended:
        _finalize(state, job, t1)

    state.ledger.record_tick(cfg.node.cpu_cores, cfg.node.memory, busy_cores, busy_gb, tick)
    state.tick_index += 1
    admit_from_queue(state)
    return state


def _finalize(state: SimulationState, job: JobRuntime, now: float) -> None:
    met = job.status is JobStatus.COMPLETED_ON_TIME
    if not met:
        state.ledger.wasted_core_hours += (job.end_time - job.start_time) * job.spec.cpu_demand
    state.finished.append(job)
    counted = not (
        state.config.miss_definition is MissDefinition.LATE and job.terminated_by == "policy"
    )
    f = state.policy.on_finish(met, job.first_x, counted=counted)
    if f is not None:
        state.trace.append((now, f, state.policy.theta))


@dataclass
class SimulationReport:
    config: ScenarioConfig
    jobs: list[JobRuntime]
    summary: RateSummary
    ledger: UtilizationLedger
    trace: list[tuple[float, float, float]]
    duration: float  # simulated hours until the node drained

    @property
    def name(self) -> str:
        return self.config.name

    @property
    def seed(self) -> int:
        return self.config.seed


def run_simulation(scenario: ScenarioConfig, jobs: list[JobSpec] | None = None) -> SimulationReport:
    scenario.validate()
    if jobs is None:
        jobs = generate_workload(scenario.workload, scenario.seed)
    state = new_state(scenario, jobs)
    admit_from_queue(state)
    while not state.done:
        step(state)
    return SimulationReport(
        config=scenario,
        jobs=state.finished,
        summary=summarize(state.finished, state.ledger),
        ledger=state.ledger,
        trace=state.trace,
        duration=state.clock,
    )

import math

import numpy as np
import pytest

from vmsched.engine import JobStatus, SimulationReport

_LOG_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LOG_KEY] = []


@pytest.fixture
def acceptance_log(pytestconfig):
    """Append (criterion, passed, detail); the lines are echoed in the terminal summary."""

    def record(criterion: int, passed: bool, detail: str) -> None:
        line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}"
        pytestconfig.stash[_LOG_KEY].append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LOG_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def conservation_problems(report: SimulationReport, expected_jobs: int | None = None) -> list[str]:
    """Ledger, capacity, work and rate identity checks for one finished run."""
    cfg = report.config
    node, tick = cfg.node, cfg.clock.tick
    led, s = report.ledger, report.summary
    problems = []

    total_core = led.busy_core_hours + led.idle_core_hours
    if abs(total_core - node.cpu_cores * report.duration) > node.cpu_cores * tick:
        problems.append(f"core-hours {total_core} vs capacity {node.cpu_cores * report.duration}")
    total_gb = led.busy_gb_hours + led.idle_gb_hours
    if abs(total_gb - node.memory * report.duration) > node.memory * tick:
        problems.append(f"GB-hours {total_gb} vs capacity {node.memory * report.duration}")
    if led.idle_core_hours < -1e-6 or led.idle_gb_hours < -1e-6:
        problems.append("negative idle time")
    if led.wasted_core_hours > led.busy_core_hours + 1e-6:
        problems.append("wasted core-hours exceed busy core-hours")

    # independent occupancy sweep over the job intervals
    starts = np.array([j.start_time for j in report.jobs])
    ends = np.array([j.end_time for j in report.jobs])
    cores = np.array([j.spec.cpu_demand for j in report.jobs], dtype=float)
    mem = np.array([j.spec.mem_demand for j in report.jobs], dtype=float)
    if len(report.jobs):
        times = np.concatenate([starts, ends])
        order = np.lexsort((np.concatenate([np.ones_like(starts), np.zeros_like(ends)]), times))
        dc = np.concatenate([cores, -cores])[order].cumsum()
        dm = np.concatenate([mem, -mem])[order].cumsum()
        if dc.max() > node.cpu_cores + 1e-9:
            problems.append(f"cores exceeded: {dc.max()}")
        if dm.max() > node.memory + 1e-9:
            problems.append(f"memory exceeded: {dm.max()}")
        busy_from_jobs = float(((ends - starts) * cores).sum())
        if not math.isclose(busy_from_jobs, led.busy_core_hours, rel_tol=1e-9, abs_tol=1e-6):
            problems.append(f"busy core-hours {led.busy_core_hours} vs job intervals {busy_from_jobs}")

    for j in report.jobs:
        if j.status not in (JobStatus.COMPLETED_ON_TIME, JobStatus.COMPLETED_LATE, JobStatus.TERMINATED):
            problems.append(f"job {j.spec.id} not terminal")
        if j.work_done > j.spec.duration + 1e-9:
            problems.append(f"job {j.spec.id} overworked")
        if j.status is not JobStatus.TERMINATED and not math.isclose(j.work_done, j.spec.duration):
            problems.append(f"job {j.spec.id} completed without finishing its work")
        if j.status is JobStatus.COMPLETED_ON_TIME and j.end_time > j.deadline + 1e-9:
            problems.append(f"job {j.spec.id} on time after its deadline")

    ids = [j.spec.id for j in report.jobs]
    if len(set(ids)) != len(ids):
        problems.append("a job finished twice")
    if expected_jobs is not None and len(ids) != expected_jobs:
        problems.append(f"{len(ids)} jobs finished, {expected_jobs} submitted")

    if s.jobs_total:
        if s.on_time + s.late + s.terminated != s.jobs_total:
            problems.append("outcome counts do not add up")
        if abs(s.deadline_success_rate + s.deadline_miss_rate - 1.0) > 1e-12:
            problems.append("deadline success + miss != 1")
        if s.termination_rate > s.deadline_miss_rate + 1e-12:
            problems.append("termination rate exceeds miss rate")
        if abs(s.global_success_rate - (s.on_time + s.late) / s.jobs_total) > 1e-12:
            problems.append("global success rate identity broken")
    return problems

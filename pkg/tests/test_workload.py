import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vmsched.errors import ConfigError
from vmsched.workload import (
    DEFAULT_CLASSES,
    ClassName,
    JobClass,
    WorkloadConfig,
    assign_deadline,
    generate_workload,
)


def fixed_class_config(duration=10.0):
    return WorkloadConfig(classes=(JobClass(ClassName.SIMULATION, (duration, duration), 1, 1.0, 1.0),))


def test_stopping_rule_hand_trace():
    jobs = generate_workload(fixed_class_config(10.0), seed=0, total_hours=25)
    assert [j.duration for j in jobs] == [10.0, 10.0, 10.0]


def test_same_seed_same_jobs():
    cfg = WorkloadConfig(total_hours=500)
    assert generate_workload(cfg, 7) == generate_workload(cfg, 7)
    assert generate_workload(cfg, 7) != generate_workload(cfg, 8)


@pytest.mark.parametrize("hours", [0, -5])
def test_nonpositive_total_hours_rejected(hours):
    with pytest.raises(ConfigError):
        generate_workload(WorkloadConfig(), 0, total_hours=hours)


def test_empty_class_list_rejected():
    with pytest.raises(ConfigError):
        generate_workload(WorkloadConfig(classes=()), 0)


def test_weights_must_normalize():
    bad = tuple(JobClass(c.name, c.duration_range, c.cpu_demand, c.mem_demand, 0.5) for c in DEFAULT_CLASSES)
    with pytest.raises(ConfigError):
        WorkloadConfig(classes=bad).validate()
    zero = tuple(JobClass(c.name, c.duration_range, c.cpu_demand, c.mem_demand, 0.0) for c in DEFAULT_CLASSES)
    with pytest.raises(ConfigError):
        WorkloadConfig(classes=zero).validate()


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(duration_range=(0.0, 1.0)),
        dict(duration_range=(3.0, 2.0)),
        dict(cpu_demand=0),
        dict(mem_demand=0.0),
        dict(mix_weight=-0.1),
    ],
)
def test_job_class_invariants(kwargs):
    base = dict(name=ClassName.SIMULATION, duration_range=(1.0, 2.0), cpu_demand=1, mem_demand=1.0, mix_weight=1.0)
    base.update(kwargs)
    with pytest.raises(ConfigError):
        JobClass(**base)


@pytest.mark.parametrize(
    "args, expected",
    [((100, 0.05, 0), 105.0), ((100, 0, 0), 100.0), ((24, 0.05, 10), 35.2)],
)
def test_assign_deadline_examples(args, expected):
    assert assign_deadline(*args) == pytest.approx(expected, abs=1e-12)


def test_negative_buffer_rejected():
    with pytest.raises(ConfigError):
        assign_deadline(10, -0.01)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), hours=st.floats(1.0, 400.0), buffer=st.floats(0.0, 2.0))
def test_generated_jobs_respect_invariants(seed, hours, buffer):
    cfg = WorkloadConfig(buffer_fraction=buffer, total_hours=hours)
    jobs = generate_workload(cfg, seed)
    total = sum(j.duration for j in jobs)
    assert total >= hours
    assert total - jobs[-1].duration < hours
    assert [j.id for j in jobs] == list(range(len(jobs)))
    submits = [j.submit_time for j in jobs]
    assert submits == sorted(submits)
    for j in jobs:
        lo, hi = j.job_class.duration_range
        assert lo <= j.duration <= hi
        assert 0 < j.duration <= j.deadline - j.submit_time + 1e-9
        assert math.isclose(j.deadline_window, j.duration * (1 + buffer), rel_tol=1e-12)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_class_frequencies_match_weights(seed):
    jobs = generate_workload(WorkloadConfig(), seed, total_hours=120_000)
    assert len(jobs) >= 10_000
    names = np.array([j.job_class.name.value for j in jobs])
    for cls in DEFAULT_CLASSES:
        assert abs(np.mean(names == cls.name.value) - cls.mix_weight) <= 0.02

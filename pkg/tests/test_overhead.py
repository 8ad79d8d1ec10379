import pytest
from hypothesis import given
from hypothesis import strategies as st

from vmsched.errors import ConfigError, ContractViolation
from vmsched.overhead import (
    OverheadMode,
    OverheadModel,
    SlotClock,
    contention_extra,
    default_contention_table,
    effective_overhead,
    slots_required,
    virtual_exec_time,
)
from vmsched.workload import ClassName

mixes = st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))


@given(mixes)
def test_off_is_always_zero(mix):
    assert effective_overhead(OverheadModel.off(), mix) == 0.0
    assert effective_overhead(OverheadModel(OverheadMode.OFF, 0.3, {mix: 1.0}), mix) == 0.0


@given(mixes)
def test_static_ignores_mix(mix):
    assert effective_overhead(OverheadModel.static(0.15), mix) == 0.15


def test_dynamic_lookup_adds_base():
    model = OverheadModel.dynamic(base=0.05, table={(0, 0, 4): 0.20})
    assert effective_overhead(model, {ClassName.RECONSTRUCTION: 4}) == pytest.approx(0.25)
    assert effective_overhead(model, {"Reconstruction": 4}) == pytest.approx(0.25)
    # missing bucket falls back to the base alone
    assert effective_overhead(model, (1, 1, 1)) == pytest.approx(0.05)


def test_negative_counts_are_rejected():
    with pytest.raises(ContractViolation):
        effective_overhead(OverheadModel.dynamic(), {"Simulation": -1})


@pytest.mark.parametrize("base, table", [(-0.1, {}), (0.0, {(0, 0, 1): -0.5}), (0.0, {(0, 1): 0.1})])
def test_model_validation(base, table):
    with pytest.raises(ConfigError):
        OverheadModel(OverheadMode.DYNAMIC, base, table)


def test_default_table_shape():
    table = default_contention_table(8.0)
    assert all(v >= 0 for v in table.values())
    assert (1, 1, 1) not in table  # light mix runs at the base
    assert table[(0, 0, 4)] == contention_extra((0, 0, 4), 8.0) > 0.05  # a full memory node thrashes
    # a bigger node tolerates the same mix
    assert contention_extra((0, 0, 4), 16.0) < contention_extra((0, 0, 4), 8.0)
    # pure memory load below the first pressure step costs nothing
    assert contention_extra((4, 0, 0), 8.0) == 0.0


@pytest.mark.parametrize("e, d, expected", [(100, 0, 100), (100, 0.05, 105), (24, 0.25, 30)])
def test_virtual_exec_time_examples(e, d, expected):
    assert virtual_exec_time(e, d) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("e, d", [(0, 0.1), (-1, 0.1), (10, -0.01)])
def test_virtual_exec_time_domain(e, d):
    with pytest.raises(ContractViolation):
        virtual_exec_time(e, d)


@given(st.floats(1e-3, 1e4), st.floats(0, 5), st.floats(0, 5))
def test_virtual_exec_time_monotone(e, a, b):
    lo, hi = sorted((a, b))
    assert virtual_exec_time(e, lo) <= virtual_exec_time(e, hi)
    assert virtual_exec_time(e, 0) == e
    assert virtual_exec_time(e, a) >= e


@pytest.mark.parametrize("ev, t, expected", [(10, 2, 5), (10, 10, 1), (10, 3, 4), (10, 0.1, 100), (0.01, 0.1, 1)])
def test_slots_examples(ev, t, expected):
    assert slots_required(ev, SlotClock(t)) == expected


@pytest.mark.parametrize("t", [0, -1, float("inf")])
def test_bad_tick(t):
    with pytest.raises(ConfigError):
        SlotClock(t)
    if t <= 0:
        with pytest.raises(ConfigError):
            slots_required(10, t)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.floats(1e-2, 10), st.floats(1e-2, 10))
def test_slots_monotone(e1, e2, t1, t2):
    lo, hi = sorted((e1, e2))
    assert slots_required(lo, t1) <= slots_required(hi, t1)
    tl, th = sorted((t1, t2))
    assert slots_required(e1, th) <= slots_required(e1, tl)
    assert slots_required(e1, t1) >= 1

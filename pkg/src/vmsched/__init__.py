"""Deadline-aware virtual machine scheduling simulator."""
from .config import default_scenario, load_scenario, scenario_from_dict
from .engine import (
    JobRuntime,
    JobStatus,
    MissDefinition,
    NodeConfig,
    ScenarioConfig,
    SimulationReport,
    SimulationState,
    run_simulation,
    step,
)
from .errors import ConfigError, ContractViolation
from .harness import SweepKind, SweepSpec, emit_csv, emit_failure_trace, make_sweep, run_sweep, steady_configs
from .metrics import RateSummary, UtilizationLedger, summarize
from .overhead import OverheadMode, OverheadModel, SlotClock, effective_overhead, slots_required, virtual_exec_time
from .policy import (
    CdfEstimator,
    Decision,
    FailureRateEstimator,
    PolicyConfig,
    PolicyKind,
    PolicyState,
    ThresholdController,
    compute_x,
    decide,
)
from .workload import ClassName, JobClass, JobSpec, WorkloadConfig, assign_deadline, generate_workload

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

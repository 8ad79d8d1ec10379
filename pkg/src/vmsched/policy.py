"""Continue/terminate decisions for jobs projected to miss their deadline.

Three ways of picking the threshold on the miss ratio x:

* fixed       -- a constant threshold
* adaptive    -- a quantized feedback loop that steers the measured failure
                 rate towards a target
* statistical -- a quantile of the x values seen on jobs that went on to
                 meet their deadline anyway
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigError, ContractViolation


class PolicyKind(str, Enum):
    NONE = "none"
    FIXED = "fixed"
    ADAPTIVE = "adaptive"
    STATISTICAL = "statistical"


class Decision(str, Enum):
    CONTINUE = "continue"
    TERMINATE = "terminate"


def compute_x(remaining_virtual: float, time_to_deadline: float) -> float:
    """Normalized shortfall of a job that will overrun its deadline."""
    if not (remaining_virtual > 0 and time_to_deadline > 0):
        raise ContractViolation("remaining time and time to deadline must both be > 0")
    if not remaining_virtual > time_to_deadline:
        raise ContractViolation(
            f"job is not projected to miss (remaining={remaining_virtual}, ttd={time_to_deadline})"
        )
    return (remaining_virtual - time_to_deadline) / remaining_virtual


def decide(x: float, threshold: float) -> Decision:
    # ties reject
    return Decision.CONTINUE if x < threshold else Decision.TERMINATE


@dataclass
class FailureRateEstimator:
    """Failure rate blending the lifetime success ratio with the latest outcome.

    ``f = 1 - ((n/N)(1 - alpha) + S*alpha)`` where S is 1 if the most recent
    finished job met its deadline.
    """

    alpha: float = 0.05
    n: int = 0
    N: int = 0
    S: int = 0
    f: float = 0.0

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")

    def record_outcome(self, met_deadline: bool) -> float:
        self.N += 1
        if met_deadline:
            self.n += 1
        self.S = 1 if met_deadline else 0
        self.f = failure_rate(self.n, self.N, self.alpha, self.S)
        return self.f


def failure_rate(n: int, N: int, alpha: float, S: int) -> float:
    if N <= 0:
        raise ContractViolation("failure rate needs at least one finished job")
    return 1.0 - ((n / N) * (1.0 - alpha) + S * alpha)


@dataclass
class ThresholdController:
    """Quantized threshold tracker.

    A failure rate above target lowers the threshold by one step (terminate
    more eagerly); below target raises it. Bounded to [theta_min, theta_max].
    """

    theta: float = 0.6
    step: float = 0.1
    target: float = 0.2
    theta_min: float = 0.0
    theta_max: float = 1.0

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigError("threshold step must be > 0")
        if not 0.0 <= self.theta_min <= self.theta_max <= 1.0:
            raise ConfigError("threshold bounds must satisfy 0 <= min <= max <= 1")
        if not self.theta_min <= self.theta <= self.theta_max:
            raise ConfigError(f"initial threshold {self.theta} outside bounds")
        if not 0.0 <= self.target <= 1.0:
            raise ConfigError("target failure rate must lie in [0, 1]")

    def update(self, f_measured: float) -> float:
        if f_measured > self.target:
            self.theta = max(self.theta - self.step, self.theta_min)
        elif f_measured < self.target:
            self.theta = min(self.theta + self.step, self.theta_max)
        return self.theta


@dataclass
class CdfEstimator:
    """Fixed-width histogram of x over [0, 1) for jobs that met their deadline.

    The threshold stays at ``initial_theta`` until ``min_samples`` finished
    jobs have been observed (successful or not, projected or not).
    """

    bin_width: float = 0.01
    min_samples: int = 1000
    p_target: float = 0.8
    initial_theta: float = 0.6
    counts: np.ndarray = field(init=False, repr=False)
    sample_count: int = 0
    jobs_seen: int = 0

    def __post_init__(self):
        if not 0 < self.bin_width <= 1:
            raise ConfigError("bin_width must lie in (0, 1]")
        if not 0 < self.p_target < 1:
            raise ConfigError("p_target must lie in (0, 1)")
        if self.min_samples < 0:
            raise ConfigError("min_samples must be >= 0")
        self.n_bins = int(math.ceil(1.0 / self.bin_width - 1e-9))
        self.counts = np.zeros(self.n_bins, dtype=np.int64)

    def record(self, x: float, succeeded: bool) -> None:
        if not 0.0 <= x < 1.0:
            raise ContractViolation(f"x must lie in [0, 1), got {x}")
        if not succeeded:
            return
        k = min(int(x / self.bin_width), self.n_bins - 1)
        self.counts[k] += 1
        self.sample_count += 1

    def observe_job(self) -> None:
        self.jobs_seen += 1

    @property
    def ready(self) -> bool:
        return self.jobs_seen >= self.min_samples and self.sample_count > 0

    def threshold(self) -> float:
        """P_target quantile of the success-side x distribution at bin resolution.

        Midpoint of the smallest bin edge with P[x < u] >= p_target and the
        largest edge with P[x < u] <= p_target. When the target falls inside
        a gap between samples this lands mid-gap, like the usual median of an
        even-sized sample.
        """
        if not self.ready:
            return self.initial_theta
        # below[i] = number of samples with x < i * bin_width
        below = np.concatenate(([0], np.cumsum(self.counts)))
        target = self.p_target * self.sample_count
        lo = int(np.searchsorted(below, target - 1e-9, side="left"))
        hi = int(np.searchsorted(below, target + 1e-9, side="right")) - 1
        lo = min(lo, self.n_bins)
        edge = lambda i: min(i * self.bin_width, 1.0)
        return 0.5 * (edge(lo) + edge(hi))

@dataclass
class PolicyConfig:
    kind: PolicyKind = PolicyKind.NONE
    theta_init: float = 0.6
    delta: float = 0.1
    alpha: float = 0.05
    f_target: float = 0.2
    p_target: float = 0.8
    min_samples: int = 1000
    bin_width: float = 0.01
    refresh_period: int = 100
    theta_min: float = 0.0
    theta_max: float = 1.0

    def __post_init__(self):
        self.kind = PolicyKind(self.kind)

    def validate(self) -> None:
        if self.refresh_period < 1:
            raise ConfigError("refresh_period must be >= 1")
        if not 0.0 <= self.theta_init <= 1.0:
            raise ConfigError("theta_init must lie in [0, 1]")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        # constructing the pieces runs their own checks
        PolicyState(self)


class PolicyState:
    """Mutable per-run policy state: threshold, estimator, CDF."""

    def __init__(self, config: PolicyConfig):
        self.config = config
        self.kind = config.kind
        self.estimator = FailureRateEstimator(config.alpha) if self.kind is not PolicyKind.NONE else None
        self.controller = ThresholdController(
            theta=config.theta_init,
            step=config.delta,
            target=config.f_target,
            theta_min=config.theta_min,
            theta_max=config.theta_max,
        )
        self.cdf = CdfEstimator(
            bin_width=config.bin_width,
            min_samples=config.min_samples,
            p_target=config.p_target,
            initial_theta=config.theta_init,
        )
        self.theta = config.theta_init
        self._prev_f: float | None = None
        self._since_refresh = 0

    @property
    def active(self) -> bool:
        return self.kind is not PolicyKind.NONE

    def decide(self, x: float) -> Decision:
        if not self.active:
            return Decision.CONTINUE
        return decide(x, self.theta)

    def on_finish(self, met_deadline: bool, first_x: float | None, counted: bool = True) -> float | None:
        """Feed one finished job; returns the new failure rate if the estimator moved."""
        if not self.active:
            return None
        self.cdf.observe_job()
        if first_x is not None:
            self.cdf.record(first_x, met_deadline)
        f = None
        if counted:
            f = self.estimator.record_outcome(met_deadline)
            if self.kind is PolicyKind.ADAPTIVE:
                # one-job delay between measurement and threshold update
                if self._prev_f is not None:
                    self.theta = self.controller.update(self._prev_f)
                self._prev_f = f
        if self.kind is PolicyKind.STATISTICAL:
            self._since_refresh += 1
            if self._since_refresh >= self.config.refresh_period:
                self._since_refresh = 0
                self.theta = self.cdf.threshold()
        return f

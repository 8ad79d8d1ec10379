"""The three ways of deciding whether a late-looking job keeps running.

Run: python3 demos/02_policies.py
"""
import numpy as np

from vmsched.policy import CdfEstimator, FailureRateEstimator, ThresholdController, compute_x, decide

# x measures how far behind a job is: 10 h of work left, 4 h to the deadline.
x = compute_x(remaining_virtual=10, time_to_deadline=4)
print(f"x = {x:.2f}; fixed threshold 0.6 says {decide(x, 0.6).value}, 0.7 says {decide(x, 0.7).value}")

# Failure rate mixes the lifetime success ratio with the latest outcome.
est = FailureRateEstimator(alpha=0.05)
for met in [True] * 8 + [False, False]:
    est.record_outcome(met)
print(f"after 8 successes and 2 failures: f = {est.f:.3f}")

# The adaptive controller nudges the threshold toward a target failure rate.
ctrl = ThresholdController(theta=0.6, step=0.1, target=0.2)
print("controller:", [round(ctrl.update(f), 2) for f in (0.35, 0.3, 0.25, 0.15, 0.1)])

# The statistical policy reads a quantile off the x values of jobs that
# recovered and met their deadline.
rng = np.random.default_rng(3)
cdf = CdfEstimator(p_target=0.8)
for sample in rng.beta(2, 6, 1500):
    cdf.observe_job()
    cdf.record(float(sample), succeeded=True)
print(f"80% of recovering jobs had x below {cdf.threshold():.3f} (distribution quantile ≈ {np.quantile(rng.beta(2, 6, 100000), 0.8):.3f})")

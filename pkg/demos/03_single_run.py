"""One scenario end to end, from the shipped default config.

Run: python3 demos/03_single_run.py
"""
import sys

from vmsched import harness
from vmsched.config import default_scenario, replace
from vmsched.engine import run_simulation
from vmsched.workload import WorkloadConfig

scenario = replace(default_scenario(), workload=WorkloadConfig(total_hours=2_000))
report = run_simulation(scenario)
s = report.summary
print(f"{s.jobs_total} jobs over {report.duration:.0f} simulated hours")
print(f"on time {s.on_time}, late {s.late}, terminated {s.terminated}")
print(f"deadline miss rate {s.deadline_miss_rate:.3f}, cpu {s.cpu_utilization:.3f}, memory {s.memory_utilization:.3f}")
print(f"core-hours spent on jobs that missed: {s.wasted_core_hours:.0f}")

thetas = [theta for _, _, theta in report.trace]
print(f"threshold visited {sorted(set(round(t, 2) for t in thetas))}")

print("\nCSV row:")
harness.emit_csv([report], sys.stdout)

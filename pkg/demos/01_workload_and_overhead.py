"""Job streams, deadlines and what virtualization overhead does to them.

Run: python3 demos/01_workload_and_overhead.py
"""
from collections import Counter

from vmsched.overhead import OverheadModel, effective_overhead, slots_required, virtual_exec_time
from vmsched.workload import WorkloadConfig, generate_workload

config = WorkloadConfig(total_hours=1_000)
jobs = generate_workload(config, seed=1)
print(f"{len(jobs)} jobs, {sum(j.duration for j in jobs):.1f} physical hours")
print("class mix:", dict(Counter(j.job_class.name.value for j in jobs)))

first = jobs[0]
print(f"\njob 0: {first.job_class.name.value}, e_T={first.duration:.2f} h, deadline window {first.deadline_window:.2f} h")

# A 5% buffer survives a 4% overhead but not a 6% one.
for overhead in (0.0, 0.04, 0.06, 0.25):
    e_v = virtual_exec_time(first.duration, overhead)
    verdict = "fits" if e_v <= first.deadline_window else "misses"
    print(f"  overhead {overhead:4.2f}: e_V={e_v:6.2f} h, {slots_required(e_v, 0.1):4d} slots, {verdict}")

# The dynamic model reacts to what else is running: light mixes are free,
# a memory-saturated node thrashes.
dynamic = OverheadModel.dynamic()
print("\ndynamic overhead by running mix (EG, Sim, Reco):")
for mix in [(1, 1, 1), (2, 2, 0), (0, 2, 2), (1, 1, 2), (0, 0, 4)]:
    print(f"  {mix}: {effective_overhead(dynamic, mix):.3f}")

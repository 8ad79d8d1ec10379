"""Steady-phase comparison of the five scheduler variants.

alg_1 runs jobs on bare metal, alg_2 adds a fixed 10% overhead, alg_3 makes
the overhead depend on the running mix, alg_4 and alg_5 add the adaptive and
statistical termination policies on top of alg_3.

Run: python3 demos/05_steady_phase.py [hours]   (default 100,000; about 25 s per seed)
"""
import sys

from vmsched import harness

hours = float(sys.argv[1]) if len(sys.argv) > 1 else harness.STEADY_HOURS
rows = harness.run_sweep(harness.make_sweep(harness.SweepKind.STEADY, seeds=(1, 2, 3), total_hours=hours))
print(harness.format_report(rows, title=f"steady phase, {hours:g} h"))

by_name = {a.scenario: a.mean for a in harness.aggregate(rows)}
gain = by_name["alg_4"]["global_success_rate"] - by_name["alg_3"]["global_success_rate"]
print(f"adaptive termination lifts global success by {gain:.3f} over dynamic overhead alone")

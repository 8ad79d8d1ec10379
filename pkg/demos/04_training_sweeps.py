"""Training-phase sweeps: node shape, controller gains, starting threshold.

The full sweeps use 10,000 hours per run; pass a smaller number of hours as
the first argument for a quicker look. Run: python3 demos/04_training_sweeps.py 2000
"""
import sys

from vmsched import harness

hours = float(sys.argv[1]) if len(sys.argv) > 1 else harness.TRAINING_HOURS

for kind in (harness.SweepKind.RESOURCE_RATIO, harness.SweepKind.ALPHA_DELTA, harness.SweepKind.X_THRESHOLD):
    rows = harness.run_sweep(harness.make_sweep(kind, seeds=(1, 2, 3), total_hours=hours))
    print(harness.format_report(rows, title=f"{kind.value} ({hours:g} h per run)"))

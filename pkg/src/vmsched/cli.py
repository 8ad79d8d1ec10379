"""Command line entry point: ``vmsched run|sweep|steady|default-config``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import harness
from .config import default_scenario_text, load_scenario
from .engine import SimulationReport, run_simulation
from .errors import ConfigError


def _seeds(args: argparse.Namespace) -> tuple[int, ...]:
    if args.replicates < 1:
        raise ConfigError("--replicates must be at least 1")
    return tuple(args.seed + i for i in range(args.replicates))


def _emit(reports: Sequence[SimulationReport], table, args: argparse.Namespace, stem: str) -> None:
    if args.out is None:
        harness.emit_csv(table, sys.stdout)
        if args.trace:
            for report in reports:
                sys.stdout.write(f"# trace {report.name} seed {report.seed}\n")
                harness.emit_failure_trace(report, sys.stdout)
        return
    out = Path(args.out)
    harness.emit_csv(table, out / f"{stem}.csv")
    if args.trace:
        for report in reports:
            harness.emit_failure_trace(report, out / f"{report.name}_seed{report.seed}_trace.csv")
    print(f"wrote {out / (stem + '.csv')}")


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_scenario(args.scenario_file)
    if args.seed is not None:
        config.seed = args.seed
    if args.hours is not None:
        config.workload.total_hours = args.hours
    report = run_simulation(config)
    s = report.summary
    print(
        f"{config.name} seed={config.seed}: jobs={s.jobs_total} on_time={s.on_time} late={s.late} "
        f"terminated={s.terminated} miss={s.deadline_miss_rate} makespan={report.duration:.1f}h",
        file=sys.stderr,
    )
    _emit([report], [report], args, f"{config.name}_seed{config.seed}")
    return 0


def _run_spec(spec: harness.SweepSpec, args: argparse.Namespace, stem: str) -> int:
    rows = harness.run_sweep(spec, workers=args.workers)
    print(harness.format_report(rows, title=stem), file=sys.stderr)
    _emit([row.report for row in rows], rows, args, stem)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = harness.make_sweep(args.kind, _seeds(args), args.hours)
    return _run_spec(spec, args, f"sweep_{spec.kind.value}")


def _cmd_steady(args: argparse.Namespace) -> int:
    spec = harness.make_sweep(harness.SweepKind.STEADY, _seeds(args), args.hours)
    return _run_spec(spec, args, "steady")


def _cmd_default_config(args: argparse.Namespace) -> int:
    sys.stdout.write(default_scenario_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vmsched", description="Deadline-aware VM scheduling simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, seed_default: Optional[int]) -> None:
        p.add_argument("--seed", type=int, default=seed_default, help="random seed (first replicate for sweeps)")
        p.add_argument("--out", metavar="DIR", help="write CSV files here instead of stdout")
        p.add_argument("--trace", action="store_true", help="also emit the failure-rate trace per run")
        p.add_argument("--hours", type=float, help="override the total workload hours")

    run = sub.add_parser("run", help="run one scenario file")
    run.add_argument("scenario_file")
    common(run, None)
    run.set_defaults(func=_cmd_run)

    sweep = sub.add_parser("sweep", help="run a training sweep")
    sweep.add_argument("kind", choices=[k.value for k in harness.SweepKind])
    common(sweep, 1)
    sweep.add_argument("--replicates", type=int, default=3)
    sweep.add_argument("--workers", type=int, default=1)
    sweep.set_defaults(func=_cmd_sweep)

    steady = sub.add_parser("steady", help="compare alg_1..alg_5 on the long workload")
    common(steady, 1)
    steady.add_argument("--replicates", type=int, default=1)
    steady.add_argument("--workers", type=int, default=1)
    steady.set_defaults(func=_cmd_steady)

    default = sub.add_parser("default-config", help="print the commented default scenario")
    default.set_defaults(func=_cmd_default_config)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"vmsched: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"vmsched: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

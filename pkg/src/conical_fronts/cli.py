"""Command-line front end.

Each verb runs the pipeline up to the corresponding stage and prints one
line per stage and one line per evaluated check; the process exits nonzero
when any requested stage fails or any evaluated check fails.

    conical-fronts run-all --config configs/quick_smoke.json --out out/
"""

from __future__ import annotations

import argparse
import sys

from .config import ExperimentConfig, load_config
from .pipeline import run_experiment, stages_for_verb

VERBS = ("validate", "solve-planar", "solve-pulsating", "build-barriers",
         "evolve", "verify", "run-all")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conical-fronts",
        description="Curved traveling fronts of a reaction-advection-"
                    "diffusion equation: strip solves, barriers, evolution, "
                    "and verification.")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        p = sub.add_parser(verb, help=f"run stages up to '{verb}'"
                           if verb != "run-all" else "run every stage")
        p.add_argument("--config", type=str, default=None,
                       help="JSON experiment config (defaults built in)")
        p.add_argument("--out", type=str, default=None,
                       help="output directory (overrides the config)")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker processes for per-angle solves")
        p.add_argument("--grid-scale", type=float, default=1.0,
                       help="multiply every grid resolution by this factor")
    return parser


def _load(path: str | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    return load_config(path)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = _load(args.config)
    print(f"stages: {' -> '.join(stages_for_verb(args.verb))}")
    manifest = run_experiment(config, verb=args.verb, jobs=args.jobs,
                              grid_scale=args.grid_scale, out_dir=args.out)

    for stage in manifest.stages:
        line = f"stage {stage.name:<16} {stage.status:<8} {stage.seconds:8.2f}s"
        if stage.error:
            line += f"  {stage.error}"
        print(line)
    for speed in manifest.speeds:
        print(f"speed {speed['name']:<40} c = {speed['c']:.10f}")
    for report in manifest.reports:
        mark = "PASS" if report["passed"] else "FAIL"
        print(f"check {report['name']:<46} {mark}  "
              f"worst = {_fmt(report.get('worst_violation'))}  "
              f"tol = {_fmt(report.get('tolerance'))}")

    summary = manifest.summary
    print(f"summary: {'PASS' if summary['passed'] else 'FAIL'} "
          f"({summary['checks_evaluated']} checks, "
          f"{len(summary['checks_failed'])} failed, "
          f"stages failed: {summary['stages_failed'] or 'none'})")
    return 0 if summary["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Run the four standard experiments and write their CSVs.

Desk-scale by default (10 m field, 50 replicates, 200 comparison
instances; about a minute total). Use --field-size/--replicates/--instances
to scale toward the full 100 m parameterization, and --jobs to spread
replicates over worker processes. Every output is a deterministic
function of --seed.
"""

import argparse
import sys
import time
from dataclasses import replace

from fieldopt import (
    ExperimentKind,
    ExperimentSpec,
    desk_scenario,
    run_experiment,
)

EXPERIMENTS = ("baseline", "sweep-pathogen", "sweep-econ", "compare")
KINDS = {
    "baseline": ExperimentKind.BASELINE,
    "sweep-pathogen": ExperimentKind.PATHOGEN_SWEEP,
    "sweep-econ": ExperimentKind.ECONOMIC_SWEEP,
    "compare": ExperimentKind.OPTIMAL_COMPARISON,
}
OUTPUTS = {
    "baseline": ["baseline.csv"],
    "sweep-pathogen": ["pathogen_sweep.csv", "fits.csv"],
    "sweep-econ": ["econ_sweep.csv"],
    "compare": ["comparison.csv"],
}


def parse_args(argv):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "experiments",
        nargs="*",
        metavar="EXPERIMENT",
        help=f"subset of {', '.join(EXPERIMENTS)} (default: all four)",
    )
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    parser.add_argument("--replicates", type=int, default=50)
    parser.add_argument("--instances", type=int, default=200,
                        help="random instances for the compare experiment")
    parser.add_argument("--comparison-reps", type=int, default=10)
    parser.add_argument("--field-size", type=float, default=10.0,
                        help="square field edge in meters (100 = full scale)")
    args = parser.parse_args(argv)
    for name in args.experiments:
        if name not in EXPERIMENTS:
            parser.error(f"unknown experiment {name!r} (choose from {', '.join(EXPERIMENTS)})")
    return args


def main(argv=None) -> int:
    args = parse_args(argv)
    base = desk_scenario()
    scenario = replace(
        base,
        field=replace(base.field, width_m=args.field_size, height_m=args.field_size),
    )
    for name in args.experiments or EXPERIMENTS:
        spec = ExperimentSpec(
            scenario=scenario,
            kind=KINDS[name],
            replicates=args.replicates,
            master_seed=args.seed,
            out_dir=args.out,
            jobs=args.jobs,
            instances=args.instances,
            comparison_reps=args.comparison_reps,
        )
        start = time.perf_counter()
        run_experiment(spec)
        elapsed = time.perf_counter() - start
        files = ", ".join(f"{args.out}/{f}" for f in OUTPUTS[name])
        print(f"{name}: wrote {files} ({elapsed:.1f} s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())

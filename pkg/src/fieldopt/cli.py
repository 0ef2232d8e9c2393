"""Command-line entry point: simulate / optimize / baseline / sweep-pathogen
/ sweep-econ / compare over scenario files.

Exit codes: 0 success, 1 validation or usage error, 2 I/O error. The seed
is taken from --seed, else the FIELDOPT_SEED environment variable, else
the scenario's rng_seed. simulate and optimize default to the built-in
default scenario (100 m field); the experiment subcommands default to
its 10 m desk-scale variant so they finish in CI time.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .epidemic import run
from .harness import (
    ExperimentKind,
    ExperimentSpec,
    _write_csv,
    desk_scenario,
    run_baseline,
    run_economic_sweep,
    run_optimal_comparison,
    run_pathogen_sweep,
)
from .optimizer import ScoreMode, SearchMethod, optimize
from .scenario import (
    ScenarioParseError,
    ValidationError,
    _parse_float,
    apply_overrides,
    load_scenario,
    scenario_default,
)


class _Parser(argparse.ArgumentParser):
    # Usage errors exit 1 (argparse defaults to 2, reserved here for I/O).
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(_parse_float(part) for part in text.split(",") if part.strip())


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def _float_pair(text: str) -> tuple[float, float]:
    values = _float_list(text)
    if len(values) != 2:
        raise ValidationError(f"expected lo,hi pair, got {text!r}")
    return values


def build_parser() -> _Parser:
    parser = _Parser(prog="fieldopt", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario file path (defaults documented per command)")
    common.add_argument(
        "--set",
        action="append",
        metavar="SECTION.KEY=VALUE",
        help="override a scenario key (repeatable)",
    )
    common.add_argument("--seed", type=int, help="RNG seed / master seed override")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for replicates")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("simulate", parents=[common], help="run one season and print its profit")

    p = sub.add_parser("optimize", parents=[common], help="search for the best (dx, dy)")
    p.add_argument("--mode", choices=[m.value for m in ScoreMode], default="analytic")
    p.add_argument("--search", choices=[s.value for s in SearchMethod], default="grid")
    p.add_argument("--delta", type=float, default=0.05, help="grid search spacing step (m)")
    p.add_argument("--budget", type=int, default=500, help="Monte Carlo candidate count")
    p.add_argument("--reps", type=int, default=30, help="replicates per candidate (simulated mode)")
    p.add_argument("--out-dir", help="also write evaluations.csv here")

    experiment = argparse.ArgumentParser(add_help=False, parents=[common])
    experiment.add_argument(
        "--reps", type=int, help="replicates per cell/arm (default per experiment)"
    )
    experiment.add_argument("--out-dir", default="out", help="CSV output directory")

    p = sub.add_parser("baseline", parents=[experiment], help="field-density baseline experiment")
    p.add_argument("--sizes", type=_int_list, help="population sizes, e.g. 400,2500,10000")

    p = sub.add_parser("sweep-pathogen", parents=[experiment], help="(beta0, gamma) sensitivity sweep")
    p.add_argument("--beta0-values", type=_float_list, help="e.g. 0.001,0.003,0.005")
    p.add_argument("--gamma-values", type=_float_list, help="e.g. 1/65,1/42,1/21")

    p = sub.add_parser("sweep-econ", parents=[experiment], help="economic ratio sweeps")
    p.add_argument("--grow-cost-ratios", type=_float_list)
    p.add_argument("--price-discount-ratios", type=_float_list)
    p.add_argument("--grow-price-ratios", type=_float_list)

    p = sub.add_parser("compare", parents=[experiment], help="default vs optimal strategy comparison")
    p.add_argument("--instances", type=int, help="random instances to draw")
    p.add_argument("--delta", type=float, help="optimizer grid step (m)")
    p.add_argument("--width-range", type=_float_pair, metavar="LO,HI")
    p.add_argument("--height-range", type=_float_pair, metavar="LO,HI")
    p.add_argument("--beta0-range", type=_float_pair, metavar="LO,HI")
    p.add_argument("--gamma-range", type=_float_pair, metavar="LO,HI")
    return parser


def _load(args, default_factory):
    scenario = load_scenario(args.scenario) if args.scenario else default_factory()
    overrides = {}
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ScenarioParseError(f"override must be SECTION.KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    return apply_overrides(scenario, overrides) if overrides else scenario


def _resolve_seed(args, scenario) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FIELDOPT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValidationError(f"FIELDOPT_SEED must be an integer, got {env!r}") from exc
    return scenario.rng_seed


def _cmd_simulate(args) -> int:
    scenario = _load(args, scenario_default)
    scenario = replace(scenario, rng_seed=_resolve_seed(args, scenario))
    result = run(scenario)
    final_removed = result.trajectory.r_count[-1]
    plants = result.trajectory.n_t[0]
    print(
        f"profit={result.total_profit:.9g} mean_r0={result.mean_r0:.9g} "
        f"plants={plants} removed_final={final_removed}"
    )
    return 0


def _cmd_optimize(args) -> int:
    scenario = _load(args, scenario_default)
    result = optimize(
        scenario,
        search=SearchMethod(args.search),
        mode=ScoreMode(args.mode),
        delta=args.delta,
        budget=args.budget,
        n_reps=args.reps,
        base_seed=_resolve_seed(args, scenario),
    )
    if args.out_dir:
        rows = [
            {
                "dx_m": e.dx_m,
                "dy_m": e.dy_m,
                "profit_estimate": e.profit_estimate,
                "profit_std": e.profit_std,
                "n_reps": e.n_reps,
            }
            for e in result.evaluations
        ]
        _write_csv(
            args.out_dir,
            "evaluations.csv",
            ["dx_m", "dy_m", "profit_estimate", "profit_std", "n_reps"],
            rows,
        )
    best = result.best_strategy
    print(f"best dx_m={best.dx_m:.9g} dy_m={best.dy_m:.9g} profit={result.best_profit:.9g}")
    return 0


def _experiment_spec(args, kind: ExperimentKind, **extra) -> ExperimentSpec:
    scenario = _load(args, desk_scenario)
    fields = {
        "scenario": scenario,
        "kind": kind,
        "master_seed": _resolve_seed(args, scenario),
        "out_dir": args.out_dir,
        "jobs": args.jobs,
    }
    if args.reps is not None:
        fields["replicates"] = args.reps
    fields.update({key: value for key, value in extra.items() if value is not None})
    return ExperimentSpec(**fields)


def _cmd_baseline(args) -> int:
    spec = _experiment_spec(args, ExperimentKind.BASELINE, sizes=args.sizes)
    rows = run_baseline(spec)
    print(f"wrote {spec.out_dir}/baseline.csv ({len(rows)} rows)")
    return 0


def _cmd_sweep_pathogen(args) -> int:
    spec = _experiment_spec(
        args,
        ExperimentKind.PATHOGEN_SWEEP,
        beta0_values=args.beta0_values,
        gamma_values=args.gamma_values,
    )
    rows, _ = run_pathogen_sweep(spec)
    print(f"wrote {spec.out_dir}/pathogen_sweep.csv ({len(rows)} rows) and fits.csv")
    return 0


def _cmd_sweep_econ(args) -> int:
    spec = _experiment_spec(
        args,
        ExperimentKind.ECONOMIC_SWEEP,
        grow_cost_ratios=args.grow_cost_ratios,
        price_discount_ratios=args.price_discount_ratios,
        grow_price_ratios=args.grow_price_ratios,
    )
    rows = run_economic_sweep(spec)
    print(f"wrote {spec.out_dir}/econ_sweep.csv ({len(rows)} rows)")
    return 0


def _cmd_compare(args) -> int:
    spec = _experiment_spec(
        args,
        ExperimentKind.OPTIMAL_COMPARISON,
        instances=args.instances,
        optimizer_delta=args.delta,
        width_range=args.width_range,
        height_range=args.height_range,
        beta0_range=args.beta0_range,
        gamma_range=args.gamma_range,
        comparison_reps=args.reps,
    )
    rows, _ = run_optimal_comparison(spec)
    print(f"wrote {spec.out_dir}/comparison.csv ({len(rows)} rows)")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "optimize": _cmd_optimize,
    "baseline": _cmd_baseline,
    "sweep-pathogen": _cmd_sweep_pathogen,
    "sweep-econ": _cmd_sweep_econ,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, ScenarioParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

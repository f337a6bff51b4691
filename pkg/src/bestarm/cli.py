"""Command-line interface: run experiments, list scenarios, print the bound."""

from __future__ import annotations

import argparse
import sys

from .engine import RunConfig, parse_mode
from .harness import (
    ConfigError,
    DEFAULT_HISTOGRAM_BINS,
    emit_report,
    get_scenario,
    builtin_scenarios,
    load_config,
    run_experiment,
)
from .lowerbound import characteristic_time, sample_complexity_bound


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bestarm",
        description="Fixed-confidence best-arm identification benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run seeded trials and emit reports")
    run_p.add_argument("--config", help="JSON experiment config")
    run_p.add_argument("--scenario", help="builtin scenario name")
    run_p.add_argument(
        "--mode",
        default="nonstructured,structured,el",
        help="comma-separated modes (nonstructured, structured, el)",
    )
    run_p.add_argument("--trials", type=int, default=100)
    run_p.add_argument("--delta", type=float, help="risk in (0,1); required")
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--out", help="output directory (omit to print only)")
    run_p.add_argument("--alpha", type=float, default=0.5)
    run_p.add_argument("--epsilon", type=float, default=0.0, help="stopping slack")
    run_p.add_argument("--max-steps", type=int, default=10_000_000)
    run_p.add_argument("--workers", type=int, default=None)
    run_p.add_argument("--bins", type=int, default=DEFAULT_HISTOGRAM_BINS)

    scen_p = sub.add_parser("scenarios", help="inspect builtin scenarios")
    scen_sub = scen_p.add_subparsers(dest="scenarios_command", required=True)
    scen_sub.add_parser("list", help="list builtin scenarios")

    lb_p = sub.add_parser("lowerbound", help="print the sample-complexity floor")
    lb_p.add_argument("--scenario", required=True)
    lb_p.add_argument("--delta", type=float, required=True)
    return parser


def _cmd_run(args) -> int:
    if args.config:
        plan = load_config(args.config)
        scenario = plan.scenario
        base_config = plan.base_config
        trials = plan.trials
        modes = plan.modes
        out_dir = args.out if args.out else plan.out_dir
        bins = plan.histogram_bins
        workers = args.workers if args.workers else plan.workers
    else:
        if not args.scenario:
            raise ConfigError("either --config or --scenario is required")
        if args.delta is None:
            raise ConfigError("--delta is required (the risk has no default)")
        scenario = get_scenario(args.scenario)
        modes = tuple(parse_mode(tok) for tok in args.mode.split(",") if tok.strip())
        base_config = RunConfig(
            delta=args.delta,
            mode=modes[0],
            alpha=args.alpha,
            epsilon_slack=args.epsilon,
            max_steps=args.max_steps,
            seed=args.seed,
        )
        trials = args.trials
        out_dir = args.out
        bins = args.bins
        workers = args.workers

    report = run_experiment(scenario, modes, trials, base_config, workers=workers)
    print(f"scenario {report.scenario}: {report.trials} trials, delta={report.delta}")
    if report.lower_bound is not None:
        print(
            f"  lower bound: {report.lower_bound.value:.1f} samples "
            f"(T* = {report.lower_bound.t_star:.1f})"
        )
    for mode in report.modes:
        s = report.summaries[mode]
        print(
            f"  {mode.value:>14}: mean tau {s.mean_tau:10.1f}  "
            f"std {s.std_tau:9.1f}  median {s.median_tau:10.1f}  "
            f"errors {s.error_count}/{s.trials}  truncated {s.truncated_count}"
        )
    if out_dir:
        for path in emit_report(report, out_dir, histogram_bins=bins):
            print(f"  wrote {path}")
    return 0


def _cmd_scenarios_list() -> int:
    for scenario in builtin_scenarios():
        inst = scenario.instance
        means = ", ".join(f"{m:.6f}" for m in inst.means)
        print(
            f"{scenario.label}: K={inst.K} d={inst.d} "
            f"best_arm={inst.best_arm} gap={inst.gap:.6f} means=[{means}]"
        )
    return 0


def _cmd_lowerbound(args) -> int:
    scenario = get_scenario(args.scenario)
    ct = characteristic_time(scenario.instance.means)
    bound = sample_complexity_bound(ct, args.delta)
    weights = ", ".join(f"{w:.4f}" for w in ct.weights)
    print(f"scenario {scenario.label}: T* = {ct.t_star:.4f}")
    print(f"  optimal pull proportions: [{weights}]")
    print(f"  expected-sample lower bound at delta={args.delta}: {bound:.2f}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "scenarios":
            return _cmd_scenarios_list()
        if args.command == "lowerbound":
            return _cmd_lowerbound(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

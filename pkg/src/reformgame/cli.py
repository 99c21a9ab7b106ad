"""Command-line entry point.

Subcommands: solve, simulate, sweep, validate, case-data. Every run is
driven by a scenario file; flags can override the conventions, the seed,
and the Monte Carlo size. Human-readable summaries go to stdout, machine
output only to --out. Exit codes: 0 success, 1 model-parameter violation,
2 I/O or scenario-file problem, 3 solver failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .abm import estimate_equilibrium
from .equilibrium import ConvergenceError, equilibrium_report
from .model import DomainError, PosteriorConvention, ThresholdConvention
from .scenario import (
    Scenario,
    ScenarioError,
    ScenarioSchemaError,
    ingest_case_table,
    load_scenario,
    write_results,
)
from .sweep import grid_sweep

EXIT_OK = 0
EXIT_INVALID_PARAMS = 1
EXIT_IO = 2
EXIT_SOLVER = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="path to a scenario JSON file")
    common.add_argument("--out", help="write machine-readable results to this path")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format for --out (default csv)")
    common.add_argument("--seed", type=int, help="override the scenario's master seed")
    common.add_argument(
        "--convention",
        choices=tuple(c.value for c in ThresholdConvention),
        help="override the threshold convention",
    )
    common.add_argument(
        "--posterior",
        choices=tuple(c.value for c in PosteriorConvention),
        help="override the posterior convention",
    )

    parser = argparse.ArgumentParser(
        prog="reformgame",
        description="Equilibrium and Monte Carlo toolkit for the reform participation game",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve the analytic equilibrium")
    simulate = sub.add_parser("simulate", parents=[common],
                              help="Monte Carlo estimate of the equilibrium")
    simulate.add_argument("--agents", type=int, help="agents per replication")
    simulate.add_argument("--replications", type=int, help="number of replications")
    sub.add_parser("sweep", parents=[common], help="comparative-statics grid sweep")
    sub.add_parser("validate", parents=[common], help="validate a scenario file")
    sub.add_parser("case-data", parents=[common], help="ingest a banked-payroll case table")
    return parser


def _apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    params = scenario.params
    if args.convention:
        params = replace(params, threshold_convention=ThresholdConvention(args.convention))
    if args.posterior:
        params = replace(params, posterior_convention=PosteriorConvention(args.posterior))
    return replace(scenario, params=params)


def _abm_settings(scenario: Scenario, args: argparse.Namespace) -> tuple[int, int, int]:
    base = scenario.abm
    n = args.agents if args.agents is not None else (base.n if base else None)
    reps = args.replications if args.replications is not None else (
        base.replications if base else None
    )
    seed = args.seed if args.seed is not None else (base.seed if base else None)
    missing = [name for name, v in (("--agents", n), ("--replications", reps), ("--seed", seed))
               if v is None]
    if missing:
        raise ScenarioSchemaError(
            "abm",
            "scenario has no abm section; supply " + ", ".join(missing),
        )
    return n, reps, seed


def _cmd_validate(scenario: Scenario) -> None:
    print(f"scenario '{scenario.label}': parameters valid "
          f"({scenario.params.leader_type.value} policy maker, run = {scenario.run.value})")


def _cmd_solve(scenario: Scenario, args: argparse.Namespace) -> None:
    report = equilibrium_report(scenario.params)
    eq = report.equilibrium
    print(
        f"equilibrium ({eq.convention.value}): kappa_star = {eq.kappa_star:.12g}, "
        f"x_star = {eq.x_star:.12g}, psi_star = {eq.psi_star:.12g}"
    )
    print(
        f"  effective_gain = {eq.effective_gain:.12g}, iterations = {eq.iterations}, "
        f"residual = {eq.residual:.3g}, closed_form_gap = {eq.closed_form_gap:.3g}"
    )
    print(
        f"  info_cost = {report.costs.info_cost:.12g}, "
        f"partisan_cost = {report.costs.partisan_cost:.12g}"
    )
    if args.out:
        write_results(eq, args.out, args.format)


def _cmd_simulate(scenario: Scenario, args: argparse.Namespace) -> None:
    n, reps, seed = _abm_settings(scenario, args)
    est = estimate_equilibrium(scenario.params, n=n, replications=reps, seed=seed)
    print(
        f"simulated {reps} x {n} agents: mean_x = {est.mean_x:.6f} "
        f"(stderr {est.stderr_x:.2g}), analytic x_star = {est.analytic_x:.6f}, "
        f"gap = {est.abs_gap:.6f}, success rate = {est.mean_success_rate:.3f}"
    )
    if args.out:
        write_results(est, args.out, args.format)


def _cmd_sweep(scenario: Scenario, args: argparse.Namespace) -> None:
    if scenario.sweep is None:
        raise ScenarioSchemaError("sweep", "scenario has no sweep section")
    series = grid_sweep(scenario.params, scenario.sweep.parameter_name,
                        scenario.sweep.values)
    print(
        f"sweep over {series.parameter_name} ({len(series.values)} points): "
        f"kappa_star is {series.monotonicity.value}"
    )
    for value, reason in series.skipped:
        print(f"  skipped {series.parameter_name} = {value:g}: {reason}", file=sys.stderr)
    if args.out:
        write_results(series, args.out, args.format)


def _cmd_case_data(scenario: Scenario, args: argparse.Namespace,
                   scenario_path: Path) -> None:
    if scenario.case_data is None:
        raise ScenarioSchemaError("case_data", "scenario has no case_data section")
    data_path = Path(scenario.case_data.path)
    if not data_path.is_absolute():
        data_path = scenario_path.parent / data_path
    rows = ingest_case_table(data_path)
    for row in rows:
        print(
            f"{row.year}: {row.banked_count} / {row.total_active} banked "
            f"({row.rate_percent:.1f}%)"
        )
    if args.out:
        write_results(list(rows), args.out, args.format)


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints usage itself
        code = exc.code if isinstance(exc.code, int) else EXIT_IO
        return EXIT_OK if code == 0 else EXIT_IO

    try:
        scenario_path = Path(args.scenario)
        scenario = _apply_overrides(load_scenario(scenario_path), args)
        if args.command == "validate":
            _cmd_validate(scenario)
        elif args.command == "solve":
            _cmd_solve(scenario, args)
        elif args.command == "simulate":
            _cmd_simulate(scenario, args)
        elif args.command == "sweep":
            _cmd_sweep(scenario, args)
        elif args.command == "case-data":
            _cmd_case_data(scenario, args, scenario_path)
    except DomainError as exc:  # includes ParameterError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_PARAMS
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()

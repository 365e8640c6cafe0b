"""Command-line entry points.

Subcommands: `simulate` prints the budget table of one plan, `run` executes a
full search from a config file and writes the run record, `demo-1d` runs the
one-dimensional verification problems, `demo-operational` runs the bundled
realistic scenario, `serve` starts the HTTP service.

Exit codes: 0 on success, 2 on malformed inputs, 3 when initialization cannot
find enough feasible members.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from importlib import resources
from pathlib import Path

from . import ga
from .budget import BudgetSolution, load_scenario, simulate_multi_year, tax_levels_from_rates
from .ga import InfeasibleInitError
from .operational import format_paper_style
from .pipeline import execute_run, load_run_config
from .store import JsonDirStore, new_id, utc_now
from .testbed import CURVES, default_1d_config, run_1d

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_INFEASIBLE = 3

DEFAULT_DATA_DIR = os.environ.get("BUDGETBOX_DATA_DIR", "./budgetbox-data")


def _print_solution(sol: BudgetSolution) -> None:
    header = (
        f"{'year':>4} {'tax':>9} {'recipes':>9} {'expend.':>9} {'interest':>9} "
        f"{'gross':>9} {'capital':>9} {'net':>9} {'invest':>9} {'loan':>9} "
        f"{'reserve':>9} {'debt':>9} {'CDD':>7}"
    )
    print(header)
    for line, cdd in zip(sol.lines, sol.capacities):
        cdd_text = f"{cdd:7.2f}" if math.isfinite(cdd) else "    inf"
        print(
            f"{line.year + 1:>4} {line.tax:9.2f} {line.operating_recipes:9.2f} "
            f"{line.operating_expenditures:9.2f} {line.interest:9.2f} {line.gross_sfc:9.2f} "
            f"{line.capital_repayment:9.2f} {line.net_sfc:9.2f} {line.investment:9.2f} "
            f"{line.new_loan:9.2f} {line.reserve_out:9.2f} {line.debt_end:9.2f} {cdd_text}"
        )


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except Exception as exc:
        print(f"bad scenario file: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        if args.tax_rates is not None:
            taxes = tax_levels_from_rates(scenario.base_tax, args.tax_rates)
        else:
            taxes = args.taxes or []
        sol = simulate_multi_year(scenario, args.investments, taxes)
    except ValueError as exc:
        print(f"bad plan: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.json:
        print(json.dumps(sol.to_dict(), indent=2))
    else:
        _print_solution(sol)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    try:
        with open(args.config) as fh:
            config = json.load(fh)
        bundle = load_run_config(config)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (KeyError, TypeError, ValueError) as exc:
        print(f"malformed config: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    def progress(stats: ga.GenerationStats) -> bool:
        if not args.quiet and stats.generation % 10 == 0:
            print(
                f"generation {stats.generation:4d}  best {stats.best:.4f}  "
                f"mean {stats.mean:.4f}  feasible {stats.feasible_count}"
            )
        return False

    try:
        result, entries = execute_run(bundle, progress)
    except InfeasibleInitError as exc:
        print(f"infeasible initialization: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    record = {
        "run_id": new_id(),
        "status": "done",
        "created_at": utc_now(),
        "started_at": None,
        "finished_at": utc_now(),
        "config": config,
        "frame": bundle.frame_document(),
        "trace": [
            {
                "generation": s.generation,
                "best": s.best,
                "mean": s.mean,
                "feasible_count": s.feasible_count,
            }
            for s in result.trace
        ],
        "results": entries,
        "error": None,
    }
    run_store = JsonDirStore(Path(args.data_dir) / "runs")
    run_store.save(record["run_id"], record)
    print(f"run {record['run_id']} done: best {result.population.best_score:.4f}")
    print(f"record written to {run_store.path(record['run_id'])}")
    return EXIT_OK


def cmd_demo_1d(args: argparse.Namespace) -> int:
    curve = CURVES[args.curve]
    cfg = default_1d_config(
        seed=args.seed, generations=args.generations, population=args.population
    )
    report = run_1d(curve, cfg)
    print(f"curve {curve.name}: population {args.population}, {args.generations} generations")
    print(report.text_table())
    if args.csv:
        Path(args.csv).write_text(report.csv_rows())
        print(f"rows written to {args.csv}")
    return EXIT_OK


def cmd_demo_operational(args: argparse.Namespace) -> int:
    config = json.loads(
        resources.files("budgetbox.data").joinpath("demo_operational_config.json").read_text()
    )
    config["ga"]["seed"] = args.seed
    config["ga"]["generations"] = args.generations
    config["ga"]["population_size"] = args.population
    bundle = load_run_config(config)

    def progress(stats: ga.GenerationStats) -> bool:
        if stats.generation % 20 == 0:
            print(f"generation {stats.generation:4d}  best {stats.best:.4f}")
        return False

    try:
        result, entries = execute_run(bundle, progress)
    except InfeasibleInitError as exc:
        print(f"infeasible initialization: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    best = entries[0]
    print()
    print(f"best grade {best['score']:.4f} (feasible: {best['feasible']})")
    print(format_paper_style(best["project_flags"], best["tax_rates"]))
    caps = ", ".join(
        f"{c:.1f}" if c is not None else "inf" for c in best["capacities"]
    )
    print(f"Capacity to be free of debt by year : {caps} (limit 15)")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data_dir, ui_dir=args.ui_dir, workers=args.workers)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="budgetbox", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="simulate one multi-year plan")
    p_sim.add_argument("scenario", help="scenario JSON file")
    p_sim.add_argument("--investments", "-i", type=float, nargs="+", required=True)
    group = p_sim.add_mutually_exclusive_group(required=True)
    group.add_argument("--taxes", "-t", type=float, nargs="+", help="absolute tax levels")
    group.add_argument(
        "--tax-rates", type=float, nargs="+", help="per-year increase rates on the base tax"
    )
    p_sim.add_argument("--json", action="store_true", help="print the solution as JSON")
    p_sim.set_defaults(fn=cmd_simulate)

    p_run = sub.add_parser("run", help="run a full search from a config file")
    p_run.add_argument("config", help="run configuration JSON file")
    p_run.add_argument("--data-dir", default=DEFAULT_DATA_DIR)
    p_run.add_argument("--quiet", action="store_true")
    p_run.set_defaults(fn=cmd_run)

    p_1d = sub.add_parser("demo-1d", help="one-dimensional verification problems")
    p_1d.add_argument("curve", choices=sorted(CURVES))
    p_1d.add_argument("--seed", type=int, default=42)
    p_1d.add_argument("--generations", type=int, default=500)
    p_1d.add_argument("--population", type=int, default=35)
    p_1d.add_argument("--csv", help="also write the rows to this CSV file")
    p_1d.set_defaults(fn=cmd_demo_1d)

    p_op = sub.add_parser("demo-operational", help="run the bundled realistic scenario")
    p_op.add_argument("--seed", type=int, default=7)
    p_op.add_argument("--generations", type=int, default=100)
    p_op.add_argument("--population", type=int, default=50)
    p_op.set_defaults(fn=cmd_demo_operational)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--data-dir", default=DEFAULT_DATA_DIR)
    p_serve.add_argument("--ui-dir", default=None, help="directory of built UI assets")
    p_serve.add_argument("--workers", type=int, default=1, help="concurrent runs")
    p_serve.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

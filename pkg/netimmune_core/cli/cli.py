import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from netimmune_core.lib.errors import NetImmuneError
from netimmune_core.lib.experiment import compare_fronts, run_experiment
from netimmune_core.lib.generators import parse_generator_spec
from netimmune_core.lib.models import METHODS, ExperimentConfig, default_workers
from netimmune_core.lib.parser import write_edge_list


def _configure_logging(verbose: int) -> None:
    if verbose == 0:
        log_level = logging.WARNING
    elif verbose == 1:
        log_level = logging.INFO
    else:
        log_level = logging.DEBUG

    logging.basicConfig(
        level=log_level,
        format='%(levelname)s: %(message)s',
        datefmt='%H:%M:%S',
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netimmune",
        description="netimmune: cost-vs-benefit Pareto fronts for node immunisation",
    )
    parser.add_argument(
        "-v", "--verbose",
        action="count",
        default=0,
        help="Increase verbosity (-v for INFO, -vv for DEBUG)"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="Compute a front with one method")
    solve.add_argument("--graph", required=True, help="Edge-list path, generator spec (er:n:m:seed=s, ba:n:attach:seed=s, barbell:c) or dataset name")
    solve.add_argument("--method", required=True, choices=METHODS)
    solve.add_argument("--k", type=int, help="Selection size for netshield / netshield_plus")
    solve.add_argument("--batch", type=int, nargs="+", default=[], help="Batch size(s) b")
    solve.add_argument("--eps-max", type=int, help="Largest budget of the ε grid (default: sum of degrees)")
    solve.add_argument("--eps-stride", type=int, default=1, help="Step of the ε grid")
    solve.add_argument("--pop", type=int, default=100, help="Population size")
    solve.add_argument("--pm", type=float, help="Per-bit mutation probability (default: 1/n)")
    solve.add_argument("--pc", type=float, default=0.75, help="Crossover probability")
    solve.add_argument("--budget", type=int, default=10000, help="Evaluation budget per run")
    solve.add_argument(
        "--budget-mode",
        choices=["evaluations", "iterations"],
        default="evaluations",
        help="Count the budget in evaluations or in generations/steps"
    )
    solve.add_argument("--no-memo", action="store_true", help="Charge repeated genotypes against the budget")
    solve.add_argument("--stall-factor", type=int, default=10, help="Stop a run after this many times the budget in offspring")
    solve.add_argument("--ref", type=float, nargs=2, metavar=("DELTA_LAMBDA", "COST"), help="SMS-EMOA reference point")
    solve.add_argument("--trace", action="store_true", help="Write per-step population hypervolume")
    solve.add_argument("--runs", type=int, default=5, help="Repetitions of stochastic methods")
    solve.add_argument("--seed", type=int, default=0, help="Master seed; run i uses seed + i")
    solve.add_argument("--largest-component", action="store_true", help="Keep only the largest connected component")
    solve.add_argument("--workers", type=int, default=None, help="Worker processes (default: $NETIMMUNE_WORKERS or 1)")
    solve.add_argument("--eigen-solver", choices=["power", "dense"], default="power")
    solve.add_argument("--node-limit", type=int, help="Branch nodes per exact solve; points cut short are marked non-optimal")
    solve.add_argument("--out", required=True, help="Output directory")

    compare = commands.add_parser("compare", help="Merge front files and tabulate hypervolumes")
    compare.add_argument("fronts", nargs="+", help="Front files (.csv or .json)")
    compare.add_argument("--out", required=True, help="Output directory")

    gen = commands.add_parser("gen", help="Write a generated graph as an edge list")
    gen.add_argument("--spec", required=True, help="Generator spec")
    gen.add_argument("--out", required=True, help="Output edge-list file")

    return parser


def _solve(args: argparse.Namespace) -> None:
    config = ExperimentConfig(
        graph=args.graph,
        method=args.method,
        k=args.k,
        batch=args.batch,
        eps_max=args.eps_max,
        eps_stride=args.eps_stride,
        population_size=args.pop,
        p_m=args.pm,
        p_c=args.pc,
        evaluation_budget=args.budget,
        budget_mode=args.budget_mode,
        memoize=not args.no_memo,
        stall_factor=args.stall_factor,
        reference_point=tuple(args.ref) if args.ref else None,
        trace=args.trace,
        runs=args.runs,
        seed=args.seed,
        out=args.out,
        largest_component=args.largest_component,
        workers=args.workers if args.workers is not None else default_workers(),
        eigen_solver=args.eigen_solver,
        node_limit=args.node_limit,
    )
    manifest = run_experiment(config)
    print(f"Results written to: {args.out} ({len(manifest['files'])} files)")


def _compare(args: argparse.Namespace) -> None:
    merged = compare_fronts(args.fronts, args.out)
    print(f"Merged front with {len(merged)} points written to: {args.out}")


def _gen(args: argparse.Namespace) -> None:
    spec = parse_generator_spec(args.spec)
    graph = spec.build()
    write_edge_list(graph, args.out, header=f"generated by netimmune gen --spec {spec}")
    print(f"Graph with {graph.n} nodes and {graph.edge_count} edges written to: {args.out}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    handlers = {"solve": _solve, "compare": _compare, "gen": _gen}
    try:
        handlers[args.command](args)
    except ValidationError as e:
        logging.error(f"Invalid configuration: {e}")
        return 1
    except NetImmuneError as e:
        logging.error(str(e))
        return 1
    except UnicodeDecodeError as e:
        logging.error(f"Input is not valid UTF-8: {e}")
        return 1
    except OSError as e:
        logging.error(f"I/O error: {e}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

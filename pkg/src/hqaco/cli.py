"""Command line: ``hqaco solve|bench|exact`` and ``hqaco --dump-circuit Q``.

Exit codes: 0 success, 1 unreadable/invalid input, 2 no tour found,
3 instance too large for the exact solver.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .aco_core import Hyperparameters
from .bench import rows_to_csv, rows_to_json, run_bench, solve_report
from .graph_io import TSPLIBError, load_instance
from .oracle import SizeLimitError, held_karp
from .selector import get_parameters, get_selector
from .solver import SAMPLERS, SolverConfig
from .statevec import format_circuit

EXIT_OK, EXIT_INPUT, EXIT_NO_SOLUTION, EXIT_SIZE = 0, 1, 2, 3


def _solver_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--ants", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=0.4)
    p.add_argument("--beta", type=float, default=0.6)
    p.add_argument("--rho", type=float, default=0.01)
    p.add_argument("--initial-pheromone", type=float, default=0.5)
    p.add_argument("--shots", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=1, help="run seeds seed..seed+k-1, keep the best")
    p.add_argument("--sampler", choices=SAMPLERS, default="quantum")
    p.add_argument("--parallel", type=int, default=1, metavar="N")
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--timing", action="store_true", help="include elapsed seconds in the report")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hqaco", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--dump-circuit",
        type=int,
        metavar="Q",
        help="print the Q-qubit selector gate list (bound to a uniform distribution) and exit",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command")
    flags = _solver_flags()
    solve = sub.add_parser("solve", parents=[flags], help="solve one instance")
    solve.add_argument("file")
    solve.add_argument("--reference", type=float, help="reference cost for the error column")
    bench = sub.add_parser("bench", parents=[flags], help="run the benchmark instances in DIR")
    bench.add_argument("dir")
    exact = sub.add_parser("exact", help="exact optimum by Held-Karp")
    exact.add_argument("file")
    return parser


def _config(args) -> SolverConfig:
    params = Hyperparameters(
        alpha=args.alpha,
        beta=args.beta,
        rho=args.rho,
        initial_pheromone=args.initial_pheromone,
        ants=args.ants,
        shots=args.shots,
    )
    return SolverConfig(params, args.sampler, args.seed, args.parallel)


def _seeds(args) -> list[int]:
    return list(range(args.seed, args.seed + max(args.seeds, 1)))


def _emit(rows, args) -> None:
    render = rows_to_csv if args.output == "csv" else rows_to_json
    sys.stdout.write(render(rows, timing=args.timing))


def _load(path):
    try:
        return load_instance(path)
    except (OSError, TSPLIBError) as exc:
        print(f"hqaco: cannot load {path}: {exc}", file=sys.stderr)
        return None


def cmd_solve(args) -> int:
    instance = _load(args.file)
    if instance is None:
        return EXIT_INPUT
    try:
        config = _config(args)
    except ValueError as exc:
        print(f"hqaco: {exc}", file=sys.stderr)
        return EXIT_INPUT
    row = solve_report(instance, config, _seeds(args), reference=args.reference)
    _emit([row], args)
    return EXIT_OK if row.found_path else EXIT_NO_SOLUTION


def cmd_bench(args) -> int:
    try:
        config = _config(args)
    except ValueError as exc:
        print(f"hqaco: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        rows, skipped = run_bench(args.dir, config, _seeds(args))
    except TSPLIBError as exc:
        print(f"hqaco: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for name in skipped:
        print(f"SKIPPED {name}: {name}.tsp not found in {args.dir}", file=sys.stderr)
    _emit(rows, args)
    return EXIT_OK


def cmd_exact(args) -> int:
    instance = _load(args.file)
    if instance is None:
        return EXIT_INPUT
    try:
        result = held_karp(instance)
    except SizeLimitError as exc:
        print(f"hqaco: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except ValueError as exc:
        print(f"hqaco: {instance.name}: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    cost = result.optimal_cost
    print(json.dumps({
        "instance": instance.name,
        "nodes": instance.dimension,
        "optimal_cost": int(cost) if cost.is_integer() else cost,
        "optimal_cycle": result.optimal_cycle,
        "explored_states": result.explored_states,
    }))
    return EXIT_OK


def dump_circuit(q: int) -> str:
    selector = get_selector(q)
    uniform = np.full(selector.size, selector.size ** -0.5)
    return format_circuit(selector.bind(get_parameters(uniform)))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if args.dump_circuit is not None:
        if args.dump_circuit < 1:
            parser.error("--dump-circuit needs Q >= 1")
        print(dump_circuit(args.dump_circuit))
        return EXIT_OK
    handlers = {"solve": cmd_solve, "bench": cmd_bench, "exact": cmd_exact}
    if args.command not in handlers:
        parser.print_help(sys.stderr)
        return EXIT_INPUT
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: solve, check, stats, oracle, compare, and build
(tiered | ramp | batch | reduce).  Exit codes: 0 success/optimal,
2 infeasible, 3 cap exceeded, 4 validation or usage error, 5 comparison
mismatch.  All output is deterministic: identical input bytes yield
identical output bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import builders
from .comp_constraints import compile_tables
from .lattice import exact_stock_set, lattice_stock_set, safe_beta_range
from .model import (
    CapExceeded,
    Instance,
    InstanceError,
    SolutionError,
    check_feasible,
    dump_instance,
    dump_solution,
    format_ratio,
    load_instance,
    load_solution,
)
from .network import SolveOptions, build_network, predicted_bounds, solve
from .oracle import DEFAULT_ORACLE_CAP, brute_force_solve, grid_search_solve

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_CAP = 3
EXIT_INVALID = 4
EXIT_MISMATCH = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _read_instance(path: str) -> Instance:
    try:
        with open(path, "rb") as handle:
            return load_instance(handle.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _solve_options(args: argparse.Namespace) -> SolveOptions:
    max_nodes = args.max_nodes
    if max_nodes is None:
        env = os.environ.get("WP_MAX_NODES")
        if env is not None:
            try:
                max_nodes = int(env)
            except ValueError:
                raise UsageError(f"WP_MAX_NODES must be an integer, got {env!r}") from None
    return SolveOptions(
        stock_mode=args.stock_set,
        max_nodes=max_nodes,
        max_arcs=args.max_arcs,
    )


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = _read_instance(args.instance)
    result = solve(inst, _solve_options(args))
    stats = result.stats
    lines = [
        f"status: {result.status}",
    ]
    if result.solution is not None:
        lines.append(f"objective: {format_ratio(result.solution.objective)}")
    lines += [
        f"stock mode: {stats.stock_mode} (union {stats.stock_union}, pre-clip {stats.stock_pre_clip})",
        f"thickness: {stats.thickness}",
        f"nodes: {stats.nodes} (bound {stats.node_bound})",
        f"arcs: {stats.arcs} (bound {stats.arc_bound})",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    if result.solution is not None and args.output is not None:
        _write_text(args.output, dump_solution(inst, result.solution))
    return EXIT_OK if result.status == "optimal" else EXIT_INFEASIBLE


def _cmd_check(args: argparse.Namespace) -> int:
    inst = _read_instance(args.instance)
    try:
        with open(args.solution, "rb") as handle:
            sol = load_solution(inst, handle.read())
    except OSError as exc:
        raise UsageError(f"cannot read {args.solution}: {exc.strerror}") from None
    report = check_feasible(inst, sol)
    if report.ok:
        sys.stdout.write("ok\n")
        return EXIT_OK
    for violation in report.violations:
        sys.stdout.write(f"{violation}\n")
    return EXIT_INVALID


def _cmd_stats(args: argparse.Namespace) -> int:
    inst = _read_instance(args.instance)
    tables = compile_tables(inst)
    lines = [
        f"T: {inst.T}  V: {inst.V}  scale: {inst.scale}",
        f"thickness: {tables.thickness}",
        "relevant per layer: " + " ".join(str(len(tables.relevant[t])) for t in range(inst.T + 1)),
    ]
    if inst.lattice is not None and args.stock_set in ("auto", "lattice"):
        stocks = lattice_stock_set(inst, beta_range=safe_beta_range(inst))
    else:
        stocks = exact_stock_set(inst)
    lines.append(f"candidates ({stocks.mode}): pre-clip {stocks.pre_clip_size}")
    for t in range(1, inst.T + 1):
        lines.append(f"  t={t}: {stocks.size(t)}")
    node_bound, arc_bound = predicted_bounds(inst, stocks.union_size, tables.thickness)
    lines.append(f"predicted: nodes <= {node_bound}, arcs <= {arc_bound}")
    if not args.no_build:
        net = build_network(inst, stocks, tables=tables)
        lines.append(f"observed: nodes {net.node_count}, arcs {net.arc_count}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _stocks_for(inst: Instance, stock_set: str):
    # same candidate set the solver would pick, so comparisons share it
    if stock_set == "lattice" or (stock_set == "auto" and inst.lattice is not None):
        return lattice_stock_set(inst, beta_range=safe_beta_range(inst))
    return exact_stock_set(inst)


def _cmd_oracle(args: argparse.Namespace) -> int:
    inst = _read_instance(args.instance)
    if args.grid:
        sol = grid_search_solve(inst, cap=args.cap)
    else:
        sol = brute_force_solve(inst, _stocks_for(inst, args.stock_set), cap=args.cap)
    if sol is None:
        sys.stdout.write("status: infeasible\n")
        return EXIT_INFEASIBLE
    sys.stdout.write(f"status: optimal\nobjective: {format_ratio(sol.objective)}\n")
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    inst = _read_instance(args.instance)
    stocks = _stocks_for(inst, args.stock_set)
    result = solve(inst, _solve_options(args), stocks=stocks)
    reference = brute_force_solve(inst, stocks, cap=args.cap)
    solver_line = (
        f"solver: {result.status}"
        + (f" {format_ratio(result.solution.objective)}" if result.solution else "")
    )
    oracle_line = (
        "oracle: infeasible" if reference is None else f"oracle: optimal {format_ratio(reference.objective)}"
    )
    sys.stdout.write(solver_line + "\n" + oracle_line + "\n")
    solver_objective = result.solution.objective if result.solution is not None else None
    oracle_objective = reference.objective if reference is not None else None
    if solver_objective != oracle_objective:
        sys.stdout.write("mismatch\n")
        return EXIT_MISMATCH
    sys.stdout.write("match\n")
    return EXIT_OK if result.status == "optimal" else EXIT_INFEASIBLE


def _parse_rational_arg(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what}: not a rational: {text!r}") from None


def _parse_pairs(text: str, what: str) -> list[tuple[Fraction, Fraction]]:
    pairs = []
    for chunk in text.split(","):
        left, sep, right = chunk.partition(":")
        if not sep:
            raise UsageError(f"{what}: expected colon-separated pairs, got {chunk!r}")
        pairs.append((_parse_rational_arg(left, what), _parse_rational_arg(right, what)))
    return pairs


def _common_market(args: argparse.Namespace, T: int, blocks: list) -> dict[str, Any]:
    if args.sell is not None:
        price, cap = _parse_pairs(args.sell, "--sell")[0]
        periods = None
        if args.sell_periods:
            periods = [int(p) for p in args.sell_periods.split(",")]
        blocks.append(builders.sale_vendor(T, price, cap, periods))
    lattice = None
    if args.lattice is not None:
        body, sep, gamma = args.lattice.rpartition(":")
        if not sep:
            raise UsageError("--lattice: expected d1,d2,...:gamma")
        basis = [_parse_rational_arg(d, "--lattice") for d in body.split(",")]
        lattice = (basis, int(gamma))
    stock = _parse_pairs(args.stock, "--stock")
    bounds = stock[0] if len(stock) == 1 else stock
    return builders.assemble_instance(
        _parse_rational_arg(args.s0, "--s0"),
        bounds,
        blocks,
        lattice=lattice,
    )


def _cmd_build(args: argparse.Namespace) -> int:
    if args.pattern == "reduce":
        inst = _read_instance(args.instance)
        reduced = builders.reduce_time_dependent(inst)
        _write_text(args.output, dump_instance(reduced))
        return EXIT_OK
    T = args.periods
    if args.pattern == "tiered":
        block = builders.build_tiered_purchase(_parse_pairs(args.tiers, "--tiers"), T)
    elif args.pattern == "ramp":
        forbidden = []
        if args.forbid:
            for chunk in args.forbid.split(","):
                a, sep, b = chunk.partition("-")
                if not sep:
                    raise UsageError(f"--forbid: expected pairs like 1-3, got {chunk!r}")
                forbidden.append((int(a), int(b)))
        block = builders.build_ramp(_parse_pairs(args.levels, "--levels"), forbidden, T)
    elif args.pattern == "batch":
        cost: Any
        if "," in args.cost:
            cost = [_parse_rational_arg(c, "--cost") for c in args.cost.split(",")]
        else:
            cost = _parse_rational_arg(args.cost, "--cost")
        block = builders.build_batch_pricing(
            _parse_rational_arg(args.batch_size, "--batch-size"),
            args.max_batches,
            cost,
            T,
        )
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown pattern {args.pattern!r}")
    doc = _common_market(args, T, [block])
    load_instance(doc)  # builders must emit valid documents
    _write_text(args.output, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def _add_market_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--periods", type=int, required=True, help="horizon length T")
    parser.add_argument("--s0", default="0", help="initial stock (rational)")
    parser.add_argument("--stock", required=True, help="stock window LO:HI, or per-period LO:HI,LO:HI,...")
    parser.add_argument("--sell", help="add a sale vendor, PRICE:CAP")
    parser.add_argument("--sell-periods", help="periods the sale vendor is active, e.g. 2,3")
    parser.add_argument("--lattice", help="declare bound structure, d1,d2,...:gamma")
    parser.add_argument("-o", "--output", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wp", description="Exact warehouse trading scheduler.")
    parser.add_argument("--threads", type=int, default=1, help="accepted for interface stability; execution is single-threaded")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance to optimality")
    p_solve.add_argument("instance")
    p_solve.add_argument("-o", "--output", help="write the solution document here")
    p_solve.add_argument("--stock-set", choices=("auto", "lattice", "exact"), default="auto")
    p_solve.add_argument("--max-nodes", type=int, default=None, help="node cap (default from WP_MAX_NODES)")
    p_solve.add_argument("--max-arcs", type=int, default=None)
    p_solve.set_defaults(func=_cmd_solve)

    p_check = sub.add_parser("check", help="audit a solution document")
    p_check.add_argument("instance")
    p_check.add_argument("solution")
    p_check.set_defaults(func=_cmd_check)

    p_stats = sub.add_parser("stats", help="print constraint and network statistics")
    p_stats.add_argument("instance")
    p_stats.add_argument("--stock-set", choices=("auto", "lattice", "exact"), default="auto")
    p_stats.add_argument("--no-build", action="store_true", help="skip building the network")
    p_stats.set_defaults(func=_cmd_stats)

    p_oracle = sub.add_parser("oracle", help="brute-force reference solve")
    p_oracle.add_argument("instance")
    p_oracle.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP)
    p_oracle.add_argument("--grid", action="store_true", help="search basis-step trade grids instead")
    p_oracle.add_argument("--stock-set", choices=("auto", "lattice", "exact"), default="auto")
    p_oracle.set_defaults(func=_cmd_oracle)

    p_compare = sub.add_parser("compare", help="solver vs oracle on one candidate set")
    p_compare.add_argument("instance")
    p_compare.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP)
    p_compare.add_argument("--stock-set", choices=("auto", "lattice", "exact"), default="auto")
    p_compare.add_argument("--max-nodes", type=int, default=None)
    p_compare.add_argument("--max-arcs", type=int, default=None)
    p_compare.set_defaults(func=_cmd_compare)

    p_build = sub.add_parser("build", help="emit an instance from a market pattern")
    build_sub = p_build.add_subparsers(dest="pattern", required=True)

    b_tiered = build_sub.add_parser("tiered", help="tiered purchase pricing")
    b_tiered.add_argument("--tiers", required=True, help="CAP:COST,CAP:COST,... cumulative caps")
    _add_market_flags(b_tiered)
    b_tiered.set_defaults(func=_cmd_build)

    b_ramp = build_sub.add_parser("ramp", help="operating levels with ramp restrictions")
    b_ramp.add_argument("--levels", required=True, help="QTY:COST,QTY:COST,...")
    b_ramp.add_argument("--forbid", help="forbidden consecutive level pairs, e.g. 1-3,2-3")
    _add_market_flags(b_ramp)
    b_ramp.set_defaults(func=_cmd_build)

    b_batch = build_sub.add_parser("batch", help="batch pricing in binary weights")
    b_batch.add_argument("--batch-size", required=True)
    b_batch.add_argument("--max-batches", type=int, required=True)
    b_batch.add_argument("--cost", required=True, help="per-batch cost, scalar or per-period comma list")
    _add_market_flags(b_batch)
    b_batch.set_defaults(func=_cmd_build)

    b_reduce = build_sub.add_parser("reduce", help="rewrite time-dependent bounds as extra vendors")
    b_reduce.add_argument("instance")
    b_reduce.add_argument("-o", "--output", help="output file (default stdout)")
    b_reduce.set_defaults(func=_cmd_build)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"wp: {exc}\n")
        return EXIT_INVALID
    except (InstanceError, SolutionError) as exc:
        for finding in exc.findings:
            sys.stderr.write(f"wp: {finding}\n")
        return EXIT_INVALID
    except CapExceeded as exc:
        sys.stderr.write(f"wp: {exc}\n")
        return EXIT_CAP


if __name__ == "__main__":
    raise SystemExit(main())

"""Layered decision network and the exact longest-path solve.

Nodes are (layer, stock level, pending constraint set) triples, built
forward from the single source (0, s0, initially relevant constraints).
Each arc carries one period's extreme decision and its exact payoff as an
integer numerator over the instance's payoff denominator.  Feasible
schedules correspond one-to-one with source-to-terminal paths, so the
maximum-payoff schedule is the longest path, found by one value sweep per
layer.

Among equal-value optimal paths the solver returns the one with the
lexicographically smallest decision trace: after the forward sweep a
backward value-to-go sweep marks the arcs lying on some optimal path, and
a greedy forward walk picks the smallest (x, y) decision at every step.
Greedy is exact here because any on-path prefix extends to an optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .comp_constraints import ConstraintTables, advance, compile_tables, satisfied_at
from .lattice import (
    DEFAULT_PERIOD_CAP,
    StockCandidateSet,
    exact_stock_set,
    lattice_stock_set,
    safe_beta_range,
)
from .model import (
    CapExceeded,
    Decision,
    Instance,
    PayoffTable,
    Solution,
    check_feasible,
    evaluate_payoff,
)
from .transitions import TransitionCache

__all__ = [
    "Arc",
    "LongestPath",
    "Network",
    "Node",
    "SolveOptions",
    "SolveResult",
    "SolveStats",
    "build_network",
    "extract_solution",
    "longest_path",
    "solve",
]


@dataclass(frozen=True)
class Node:
    layer: int
    stock: int
    pending: frozenset[int]

    @property
    def pending_key(self) -> tuple[int, ...]:
        return tuple(sorted(self.pending))


@dataclass(frozen=True)
class Arc:
    """One period's decision between two nodes of adjacent layers.

    ``tail`` and ``head`` index into the node lists of layers t-1 and t;
    ``weight`` is the exact period payoff times the payoff denominator.
    """

    tail: int
    head: int
    decision: Decision
    weight: int


@dataclass
class Network:
    inst: Instance
    stocks: StockCandidateSet
    tables: ConstraintTables
    payoff: PayoffTable
    layers: list[list[Node]]
    arcs: list[list[Arc]]

    @property
    def node_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    @property
    def arc_count(self) -> int:
        return sum(len(level) for level in self.arcs)


def build_network(
    inst: Instance,
    stocks: StockCandidateSet,
    *,
    max_nodes: int | None = None,
    max_arcs: int | None = None,
    cache: TransitionCache | None = None,
    payoff: PayoffTable | None = None,
    tables: ConstraintTables | None = None,
) -> Network:
    """Forward-reachable construction of the layered decision network.

    Arcs are generated in canonical order (tail creation order, next stock
    ascending, decision ascending) and nodes in first-reached order, so the
    whole structure is a pure function of the instance and candidate set.
    Raises :class:`CapExceeded` against the optional node/arc budgets.
    """
    cache = cache if cache is not None else TransitionCache(inst, stocks)
    payoff = payoff if payoff is not None else PayoffTable(inst)
    tables = tables if tables is not None else compile_tables(inst)

    # constraints that can be discharged at period t, and a per-decision memo
    at_time: dict[int, list] = {t: [] for t in range(1, inst.T + 1)}
    for con in inst.constraints:
        for t in sorted({cond.var.time for cond in con.conditions}):
            at_time[t].append(con)
    sat_memo: dict[tuple[int, tuple[int, ...], tuple[int, ...]], frozenset[int]] = {}

    def satisfied_ids(t: int, d: Decision) -> frozenset[int]:
        key = (t, d.x, d.y)
        got = sat_memo.get(key)
        if got is None:
            got = frozenset(con.id for con in at_time[t] if satisfied_at(inst, con, t, d))
            sat_memo[key] = got
        return got

    layers: list[list[Node]] = [[Node(0, inst.s0, tables.initial_pending)]]
    arcs: list[list[Arc]] = [[]]
    nodes_total = 1
    arcs_total = 0

    for t in range(1, inst.T + 1):
        prev = layers[t - 1]
        level_nodes: list[Node] = []
        level_index: dict[tuple[int, frozenset[int]], int] = {}
        level_arcs: list[Arc] = []
        deadline = tables.deadline[t - 1]
        newly = tables.newly_relevant[t]
        for tail_idx, tail in enumerate(prev):
            for s_next, decisions in cache.options(t, tail.stock):
                for d in decisions:
                    sat = satisfied_ids(t, d)
                    if (tail.pending & deadline) - sat:
                        continue  # a last-chance constraint stays unsatisfied
                    pending = (tail.pending - sat) | (newly - sat)
                    key = (s_next, pending)
                    head_idx = level_index.get(key)
                    if head_idx is None:
                        head_idx = len(level_nodes)
                        level_index[key] = head_idx
                        level_nodes.append(Node(t, s_next, pending))
                        nodes_total += 1
                        if max_nodes is not None and nodes_total > max_nodes:
                            raise CapExceeded("network nodes", max_nodes, nodes_total)
                    level_arcs.append(Arc(tail_idx, head_idx, d, payoff.weight(t, d, s_next)))
                    arcs_total += 1
                    if max_arcs is not None and arcs_total > max_arcs:
                        raise CapExceeded("network arcs", max_arcs, arcs_total)
        layers.append(level_nodes)
        arcs.append(level_arcs)

    return Network(inst=inst, stocks=stocks, tables=tables, payoff=payoff, layers=layers, arcs=arcs)


@dataclass(frozen=True)
class LongestPath:
    """An optimal source-to-terminal path: exact value numerator and arcs."""

    value: int
    arcs: tuple[Arc, ...]


def longest_path(net: Network) -> LongestPath | None:
    """Maximum-weight path across all layers, or ``None`` when no schedule
    survives to the final layer (the instance is infeasible).
    """
    T = net.inst.T
    value: list[list[int | None]] = [[None] * len(layer) for layer in net.layers]
    if not net.layers[0]:
        return None
    value[0][0] = 0
    for t in range(1, T + 1):
        vt, vp = value[t], value[t - 1]
        for arc in net.arcs[t]:
            base = vp[arc.tail]
            if base is None:
                continue
            cand = base + arc.weight
            cur = vt[arc.head]
            if cur is None or cand > cur:
                vt[arc.head] = cand
    finals = [v for v in value[T] if v is not None]
    if not finals:
        return None
    best = max(finals)

    # value-to-go per node, for on-path membership tests
    togo: list[list[int | None]] = [[None] * len(layer) for layer in net.layers]
    togo[T] = [0] * len(net.layers[T])
    for t in range(T, 0, -1):
        tt, tp = togo[t], togo[t - 1]
        for arc in net.arcs[t]:
            suffix = tt[arc.head]
            if suffix is None:
                continue
            cand = arc.weight + suffix
            cur = tp[arc.tail]
            if cur is None or cand > cur:
                tp[arc.tail] = cand

    # greedy walk: smallest decision among arcs that keep the path optimal
    chain: list[Arc] = []
    at = 0
    acc = 0
    for t in range(1, T + 1):
        step: Arc | None = None
        for arc in net.arcs[t]:
            if arc.tail != at:
                continue
            suffix = togo[t][arc.head]
            if suffix is None or acc + arc.weight + suffix != best:
                continue
            if step is None or arc.decision.sort_key < step.decision.sort_key:
                step = arc
        assert step is not None, "an optimal prefix must extend to the final layer"
        chain.append(step)
        acc += step.weight
        at = step.head
    return LongestPath(value=best, arcs=tuple(chain))


def extract_solution(net: Network, path: LongestPath) -> Solution:
    """Turn an optimal path into a schedule, re-verifying every arc.

    Each arc is checked against the stock balance, the sales cap, the
    pending-set transition and an independent rational recomputation of its
    weight; a failure means a solver bug and raises ``RuntimeError``.
    """
    inst = net.inst
    stocks = [inst.s0]
    decisions: list[Decision] = []
    total = 0
    tail = net.layers[0][0]
    for t, arc in enumerate(path.arcs, start=1):
        head = net.layers[t][arc.head]
        d = arc.decision
        if net.layers[t - 1][arc.tail] != tail:
            raise RuntimeError(f"arc into layer {t} does not continue the path")
        if head.stock != tail.stock - sum(d.y) + sum(d.x):
            raise RuntimeError(f"arc into layer {t} violates the stock balance")
        if sum(d.y) > tail.stock:
            raise RuntimeError(f"arc into layer {t} violates the sales cap")
        if advance(inst, tail.pending, t, d) != head.pending:
            raise RuntimeError(f"arc into layer {t} is inconsistent with the pending-set transition")
        recomputed = evaluate_payoff(inst, t, d, head.stock)
        if Fraction(arc.weight, net.payoff.denominator) != recomputed:
            raise RuntimeError(f"arc into layer {t} carries a wrong weight")
        total += arc.weight
        stocks.append(head.stock)
        decisions.append(d)
        tail = head
    if tail.pending:
        raise RuntimeError("terminal node has pending constraints")
    if total != path.value:
        raise RuntimeError("path value does not match the sum of its arc weights")
    return Solution(
        stocks=tuple(stocks),
        decisions=tuple(decisions),
        objective=net.payoff.to_objective(total),
    )


@dataclass
class SolveOptions:
    """Solver knobs.

    ``beta_range=None`` means the provably covering coefficient range
    (:func:`safe_beta_range`) in lattice mode; pass the smaller V*T*gamma
    box explicitly when candidate-set size matters more than a coverage
    proof (multi-entry bases may need that, or a larger ``stock_cap``).
    """

    stock_mode: str = "auto"  # auto | lattice | exact
    stock_cap: int = DEFAULT_PERIOD_CAP
    beta_range: int | None = None
    max_nodes: int | None = None
    max_arcs: int | None = None


@dataclass
class SolveStats:
    stock_mode: str
    stock_sizes: tuple[int, ...]
    stock_union: int
    stock_pre_clip: int
    thickness: int
    nodes: int
    arcs: int
    node_bound: int
    arc_bound: int


@dataclass
class SolveResult:
    status: str  # "optimal" | "infeasible"
    solution: Solution | None
    stats: SolveStats


def predicted_bounds(inst: Instance, stock_union: int, thick: int) -> tuple[int, int]:
    """Worst-case node and arc counts for a candidate set of this size."""
    s2 = stock_union * stock_union
    c4 = 4**thick
    node_bound = inst.T * s2 * c4
    arc_bound = inst.T * inst.V * inst.V * 3 ** (2 * inst.V) * s2 * c4
    return node_bound, arc_bound


def candidate_stocks(inst: Instance, options: SolveOptions) -> StockCandidateSet:
    mode = options.stock_mode
    if mode == "auto":
        mode = "lattice" if inst.lattice is not None else "exact"
    if mode == "lattice":
        beta = options.beta_range
        if beta is None:
            # completeness first: the default box must cover every
            # signed-sum candidate, not just the usual ones
            beta = safe_beta_range(inst)
        return lattice_stock_set(inst, beta_range=beta, period_cap=options.stock_cap)
    if mode == "exact":
        return exact_stock_set(inst, options.stock_cap)
    raise ValueError(f"unknown stock mode {options.stock_mode!r}")


def solve(
    inst: Instance,
    options: SolveOptions | None = None,
    *,
    stocks: StockCandidateSet | None = None,
) -> SolveResult:
    """Exact solve: candidate stocks, network build, longest path, audit.

    ``stocks`` overrides candidate-set construction (used to compare
    solvers over one shared set).  The returned schedule has passed the
    full independent feasibility audit.
    """
    opts = options if options is not None else SolveOptions()
    if stocks is None:
        stocks = candidate_stocks(inst, opts)
    tables = compile_tables(inst)
    net = build_network(
        inst,
        stocks,
        max_nodes=opts.max_nodes,
        max_arcs=opts.max_arcs,
        tables=tables,
    )
    node_bound, arc_bound = predicted_bounds(inst, stocks.union_size, tables.thickness)
    stats = SolveStats(
        stock_mode=stocks.mode,
        stock_sizes=stocks.sizes,
        stock_union=stocks.union_size,
        stock_pre_clip=stocks.pre_clip_size,
        thickness=tables.thickness,
        nodes=net.node_count,
        arcs=net.arc_count,
        node_bound=node_bound,
        arc_bound=arc_bound,
    )
    path = longest_path(net)
    if path is None:
        return SolveResult(status="infeasible", solution=None, stats=stats)
    sol = extract_solution(net, path)
    audit = check_feasible(inst, sol)
    if not audit.ok:
        details = "; ".join(str(f) for f in audit.violations)
        raise RuntimeError(f"solver output failed the feasibility audit: {details}")
    return SolveResult(status="optimal", solution=sol, stats=stats)

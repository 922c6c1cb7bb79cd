"""Independent reference solvers and samplers.

Everything here deliberately avoids the solver's incremental machinery:
trajectories are enumerated outright and complementarity constraints are
checked on whole schedules as literal products, so agreement between
:func:`brute_force_solve` and the network solve is meaningful evidence.

``brute_force_solve`` searches the same candidate stock levels (its
completeness therefore rests only on the candidate set, not on the
pending-set bookkeeping or the longest-path sweep).  ``grid_search_solve``
drops the candidate set as well and tries every trade on the basis-step
grid.  ``random_feasible_sample`` draws audited feasible schedules for
dominance testing.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .lattice import StockCandidateSet
from .model import (
    CapExceeded,
    Decision,
    Finding,
    Instance,
    InstanceError,
    PayoffTable,
    Solution,
    check_feasible,
    decision_value,
    resolve_anchor,
)
from .transitions import TransitionCache

__all__ = [
    "brute_force_solve",
    "grid_search_solve",
    "random_feasible_sample",
    "schedule_satisfies_constraints",
]

DEFAULT_ORACLE_CAP = 10_000_000


def schedule_satisfies_constraints(inst: Instance, decisions) -> bool:
    """Whole-schedule complementarity check: every product reaches zero."""
    for con in inst.constraints:
        if not any(
            decision_value(decisions[cond.var.time - 1], cond.var)
            == resolve_anchor(inst, cond.var, cond.anchor)
            for cond in con.conditions
        ):
            return False
    return True


def brute_force_solve(
    inst: Instance,
    stocks: StockCandidateSet,
    cap: int = DEFAULT_ORACLE_CAP,
    *,
    cache: TransitionCache | None = None,
    payoff: PayoffTable | None = None,
) -> Solution | None:
    """Exhaustive search over candidate trajectories and extreme decisions.

    Returns the best feasible schedule or ``None`` when none exists.
    Counts completed trajectories against ``cap`` and raises
    :class:`CapExceeded` beyond it.  Deterministic: trajectories are walked
    in ascending (stock, decision) order and ties keep the first optimum.
    """
    cache = cache if cache is not None else TransitionCache(inst, stocks)
    table = payoff if payoff is not None else PayoffTable(inst)
    T = inst.T

    # Admissible per-period bounds: the best single-arc weight anywhere at
    # level t.  Cutting a branch that cannot strictly beat the incumbent is
    # safe (feasibility only shrinks the subtree's best) and keeps the
    # first-found tie choice.
    suffix_best = [0] * (T + 2)
    for t in range(T, 0, -1):
        level_best: int | None = None
        for s_prev in stocks.per_period[t - 1]:
            for s_next, decisions in cache.options(t, s_prev):
                stock_part = table.stock_part(t, s_next)
                for d in decisions:
                    w = table.decision_part(t, d) + stock_part
                    if level_best is None or w > level_best:
                        level_best = w
        suffix_best[t] = suffix_best[t + 1] + (level_best if level_best is not None else 0)

    leaves = 0
    best_value: int | None = None
    best_decisions: tuple[Decision, ...] = ()
    best_stocks: tuple[int, ...] = ()
    trail_decisions: list[Decision] = []
    trail_stocks: list[int] = [inst.s0]

    def walk(t: int, s_prev: int, acc: int) -> None:
        nonlocal leaves, best_value, best_decisions, best_stocks
        if t > T:
            leaves += 1
            if leaves > cap:
                raise CapExceeded("oracle trajectories", cap, leaves)
            if best_value is not None and acc <= best_value:
                return
            if not schedule_satisfies_constraints(inst, trail_decisions):
                return
            best_value = acc
            best_decisions = tuple(trail_decisions)
            best_stocks = tuple(trail_stocks)
            return
        if best_value is not None and acc + suffix_best[t] <= best_value:
            return
        for s_next, decisions in cache.options(t, s_prev):
            for d in decisions:
                trail_decisions.append(d)
                trail_stocks.append(s_next)
                walk(t + 1, s_next, acc + table.weight(t, d, s_next))
                trail_decisions.pop()
                trail_stocks.pop()

    walk(1, inst.s0, 0)
    if best_value is None:
        return None
    return Solution(
        stocks=best_stocks,
        decisions=best_decisions,
        objective=table.to_objective(best_value),
    )


def grid_search_solve(inst: Instance, cap: int = 1_000_000) -> Solution | None:
    """Exhaustive search over basis-step trade grids, no candidate set.

    Every purchase and sale ranges over zero plus all multiples of the
    basis gcd inside its interval; stock levels fall where the balance puts
    them, restricted only by the stock windows.  For linear payoffs over a
    declared lattice this is a from-first-principles optimum.  Counts
    trajectories against ``cap``.
    """
    lat = inst.lattice
    if lat is None:
        raise InstanceError([Finding("lattice", "lattice", "grid search needs a declared lattice")])
    step = 0
    for d in lat.basis:
        step = gcd(step, d)
    assert step > 0

    def grid(lo: int, hi: int) -> list[int]:
        first = -(-lo // step) * step  # ceil to the grid
        values = {0}
        values.update(range(first, hi + 1, step))
        return sorted(values)

    table = PayoffTable(inst)
    per_period: list[list[tuple[tuple[int, ...], tuple[int, ...], int, int, int]]] = []
    for t in range(1, inst.T + 1):
        combos: list[tuple[tuple[int, ...], tuple[int, ...], int, int, int]] = []
        x_lists: list[list[int]] = []
        y_lists: list[list[int]] = []
        for v in range(1, inst.V + 1):
            b = inst.bounds(v, t)
            x_lists.append(grid(b.Lx, b.Ux))
            y_lists.append(grid(b.Ly, b.Uy))
        xs_all = [()]
        for options in x_lists:
            xs_all = [prefix + (value,) for prefix in xs_all for value in options]
        ys_all = [()]
        for options in y_lists:
            ys_all = [prefix + (value,) for prefix in ys_all for value in options]
        if len(xs_all) * len(ys_all) > cap:
            raise CapExceeded("grid decision combinations", cap, len(xs_all) * len(ys_all))
        for xs in xs_all:
            for ys in ys_all:
                d = Decision(x=xs, y=ys)
                combos.append((xs, ys, sum(xs) - sum(ys), sum(ys), table.decision_part(t, d)))
        combos.sort(key=lambda item: (item[0], item[1]))
        per_period.append(combos)

    T = inst.T
    leaves = 0
    best_value: int | None = None
    best_decisions: tuple[Decision, ...] = ()
    best_stocks: tuple[int, ...] = ()
    trail_decisions: list[Decision] = []
    trail_stocks: list[int] = [inst.s0]

    def walk(t: int, s_prev: int, acc: int) -> None:
        nonlocal leaves, best_value, best_decisions, best_stocks
        if t > T:
            leaves += 1
            if leaves > cap:
                raise CapExceeded("grid trajectories", cap, leaves)
            if best_value is not None and acc <= best_value:
                return
            if not schedule_satisfies_constraints(inst, trail_decisions):
                return
            best_value = acc
            best_decisions = tuple(trail_decisions)
            best_stocks = tuple(trail_stocks)
            return
        lo, hi = inst.stock_window(t)
        for xs, ys, delta, sales, dec_part in per_period[t - 1]:
            if sales > s_prev:
                continue
            s_next = s_prev + delta
            if not (lo <= s_next <= hi):
                continue
            trail_decisions.append(Decision(x=xs, y=ys))
            trail_stocks.append(s_next)
            walk(t + 1, s_next, acc + dec_part + table.stock_part(t, s_next))
            trail_decisions.pop()
            trail_stocks.pop()

    walk(1, inst.s0, 0)
    if best_value is None:
        return None
    return Solution(
        stocks=best_stocks,
        decisions=best_decisions,
        objective=table.to_objective(best_value),
    )


def random_feasible_sample(
    inst: Instance,
    stocks: StockCandidateSet,
    seed: int,
    *,
    attempts: int = 64,
    cache: TransitionCache | None = None,
    payoff: PayoffTable | None = None,
) -> Solution | None:
    """One random feasible schedule, or ``None`` after bounded attempts.

    A seeded walk picks uniformly among reachable (next stock, decision)
    pairs per period; the finished schedule must pass the full independent
    audit, constraints included, before being returned.  Deterministic for
    a given (instance, stocks, seed).
    """
    cache = cache if cache is not None else TransitionCache(inst, stocks)
    table = payoff if payoff is not None else PayoffTable(inst)
    rng = random.Random(seed)
    for _ in range(attempts):
        s_prev = inst.s0
        decisions: list[Decision] = []
        trail = [inst.s0]
        dead = False
        value = 0
        for t in range(1, inst.T + 1):
            options = cache.options(t, s_prev)
            if not options:
                dead = True
                break
            s_next, ds = options[rng.randrange(len(options))]
            d = ds[rng.randrange(len(ds))]
            decisions.append(d)
            trail.append(s_next)
            value += table.weight(t, d, s_next)
            s_prev = s_next
        if dead:
            continue
        candidate = Solution(
            stocks=tuple(trail),
            decisions=tuple(decisions),
            objective=table.to_objective(value),
        )
        if check_feasible(inst, candidate).ok:
            return candidate
    return None

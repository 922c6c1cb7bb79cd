"""Per-period decision enumeration between two stock levels.

At an extreme point of a single period's feasible set, the trades split
into two cases.  When total sales stay strictly below the opening stock,
at most one trade variable sits strictly inside its interval and every
other is pinned to 0, its lower bound, or its upper bound; the stock
balance determines the free one.  When total sales exhaust the opening
stock, one sale may be freed to meet sum(y) = s_prev and one purchase to
meet sum(x) = s_next, independently.

The enumeration below walks exactly those cases, so the candidate count is
bounded by 2V*3^(2V-1) + V^2*3^(2V-2) before deduplication (7 for V=1,
144 for V=2).  Every returned decision satisfies the balance
s_next = s_prev - sum(y) + sum(x), the sales cap and the trade domains.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from itertools import product

from .model import Decision, Instance

__all__ = ["TransitionCache", "decision_count_bound", "enumerate_decisions"]


def decision_count_bound(V: int) -> int:
    """Upper bound on distinct extreme decisions for a vendor count."""
    if V == 0:
        return 1
    return 2 * V * 3 ** (2 * V - 1) + V * V * 3 ** (2 * V - 2)


def _anchors(lo: int, hi: int) -> tuple[int, ...]:
    # {0, L, U}; collapses when L == 0 or L == U
    return tuple(sorted({0, lo, hi}))


def _in_domain(value: int, lo: int, hi: int) -> bool:
    return value == 0 or (lo <= value <= hi)


def _pinned_sum_vectors(
    anchor_lists: list[tuple[int, ...]],
    domains: list[tuple[int, int]],
    target: int,
) -> set[tuple[int, ...]]:
    """Vectors summing to ``target`` with at most one non-anchored entry."""
    n = len(anchor_lists)
    found: set[tuple[int, ...]] = set()
    for combo in product(*anchor_lists):
        if sum(combo) == target:
            found.add(combo)
    for free in range(n):
        rest = anchor_lists[:free] + anchor_lists[free + 1 :]
        lo, hi = domains[free]
        for combo in product(*rest):
            value = target - sum(combo)
            if _in_domain(value, lo, hi):
                found.add(combo[:free] + (value,) + combo[free:])
    return found


def enumerate_decisions(inst: Instance, t: int, s_prev: int, s_next: int) -> list[Decision]:
    """All extreme decisions moving period-``t`` stock s_prev -> s_next.

    Returned in canonical ascending order of (x, y); deduplicated.  Stock
    levels are scaled ints and must be nonnegative.
    """
    assert s_prev >= 0 and s_next >= 0, "stock levels must be nonnegative"
    V = inst.V
    delta = s_next - s_prev
    rows = [inst.bounds(v, t) for v in range(1, V + 1)]
    x_dom = [(b.Lx, b.Ux) for b in rows]
    y_dom = [(b.Ly, b.Uy) for b in rows]
    x_anchors = [_anchors(*d) for d in x_dom]
    y_anchors = [_anchors(*d) for d in y_dom]

    found: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()

    # Case 1a: everything anchored (covers V = 0, where only delta == 0 works).
    for xs in product(*x_anchors):
        sx = sum(xs)
        for ys in product(*y_anchors):
            sy = sum(ys)
            if sx - sy == delta and sy <= s_prev:
                found.add((xs, ys))

    # Case 1b: one free purchase, balance solves it.
    for free in range(V):
        rest = x_anchors[:free] + x_anchors[free + 1 :]
        lo, hi = x_dom[free]
        for ys in product(*y_anchors):
            sy = sum(ys)
            if sy > s_prev:
                continue
            for xs in product(*rest):
                value = delta + sy - sum(xs)
                if _in_domain(value, lo, hi):
                    found.add((xs[:free] + (value,) + xs[free:], ys))

    # Case 1c: one free sale, balance solves it.
    for free in range(V):
        rest = y_anchors[:free] + y_anchors[free + 1 :]
        lo, hi = y_dom[free]
        for xs in product(*x_anchors):
            sx = sum(xs)
            for ys in product(*rest):
                value = sx - delta - sum(ys)
                if _in_domain(value, lo, hi) and sum(ys) + value <= s_prev:
                    found.add((xs, ys[:free] + (value,) + ys[free:]))

    # Case 2: sales exhaust the opening stock (sum(y) = s_prev, so
    # sum(x) = s_next); one free sale and one free purchase, independently.
    sale_vecs = _pinned_sum_vectors(y_anchors, y_dom, s_prev)
    if sale_vecs:
        purchase_vecs = _pinned_sum_vectors(x_anchors, x_dom, s_next)
        for ys in sale_vecs:
            for xs in purchase_vecs:
                found.add((xs, ys))

    return [Decision(x=xs, y=ys) for xs, ys in sorted(found)]


class TransitionCache:
    """Memoized decision enumeration over a fixed candidate stock set.

    Shared by the solver, the oracle and the sampler so repeated
    (t, s_prev, s_next) queries cost one enumeration.
    """

    def __init__(self, inst: Instance, stocks) -> None:
        self.inst = inst
        self.stocks = stocks
        # widest one-period stock move, per period
        self._max_buy = [0] * (inst.T + 1)
        self._max_sell = [0] * (inst.T + 1)
        for t in range(1, inst.T + 1):
            self._max_buy[t] = sum(inst.bounds(v, t).Ux for v in range(1, inst.V + 1))
            self._max_sell[t] = sum(inst.bounds(v, t).Uy for v in range(1, inst.V + 1))
        self._decisions: dict[tuple[int, int, int], list[Decision]] = {}
        self._options: dict[tuple[int, int], list[tuple[int, list[Decision]]]] = {}

    def decisions(self, t: int, s_prev: int, s_next: int) -> list[Decision]:
        key = (t, s_prev, s_next)
        got = self._decisions.get(key)
        if got is None:
            got = enumerate_decisions(self.inst, t, s_prev, s_next)
            self._decisions[key] = got
        return got

    def reachable(self, t: int, s_prev: int) -> tuple[int, ...]:
        """Candidate next stocks within one period's trading range."""
        level = self.stocks.per_period[t]
        lo = bisect_left(level, s_prev - self._max_sell[t])
        hi = bisect_right(level, s_prev + self._max_buy[t])
        return tuple(level[lo:hi])

    def options(self, t: int, s_prev: int) -> list[tuple[int, list[Decision]]]:
        """(s_next, decisions) pairs with nonempty decision lists."""
        key = (t, s_prev)
        got = self._options.get(key)
        if got is None:
            got = []
            for s_next in self.reachable(t, s_prev):
                ds = self.decisions(t, s_prev, s_next)
                if ds:
                    got.append((s_next, ds))
            self._options[key] = got
        return got

"""Complementarity-constraint bookkeeping for the layered search.

A constraint is *relevant* at layer t (t in 0..T) when its condition window
[t_min, t_max] contains period t+1, and hits its *deadline* at the layer
just before its last chance, t_max - 1.  The solver tracks, per node, the
set of relevant constraints not yet satisfied (the pending set); crossing an
arc with the period-t decision discharges every constraint that decision
satisfies, admits the newly relevant ones, and fails if a deadline passes
unsatisfied.

The pending set changes only while constraint windows open or close, so the
number of distinct sets per layer is at most 2^thickness where thickness is
the largest number of simultaneously relevant constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import ComplementarityConstraint, Decision, Instance, decision_value, resolve_anchor

__all__ = [
    "ConstraintTables",
    "advance",
    "compile_tables",
    "deadline_set",
    "relevant_set",
    "satisfied_at",
    "thickness",
]

PendingSet = frozenset[int]


def relevant_set(constraints: Sequence[ComplementarityConstraint], t: int) -> PendingSet:
    """Ids of constraints whose window [t_min, t_max] contains period t+1."""
    return frozenset(c.id for c in constraints if c.t_min <= t + 1 <= c.t_max)


def deadline_set(constraints: Sequence[ComplementarityConstraint], t: int) -> PendingSet:
    """Ids of constraints whose last condition time is period t+1."""
    return frozenset(c.id for c in constraints if c.t_max == t + 1)


def thickness(constraints: Sequence[ComplementarityConstraint]) -> int:
    """Largest number of simultaneously relevant constraints over layers 0..T.

    Layer 0 counts: a constraint with a period-1 condition is already
    relevant before any decision is taken.
    """
    if not constraints:
        return 0
    horizon = max(c.t_max for c in constraints)
    return max(len(relevant_set(constraints, t)) for t in range(horizon))


def satisfied_at(inst: Instance, con: ComplementarityConstraint, t: int, d: Decision) -> bool:
    """True iff some condition of ``con`` at period ``t`` holds under ``d``.

    Conditions at other periods are ignored; they are judged on the arcs of
    their own periods.
    """
    for cond in con.conditions:
        if cond.var.time != t:
            continue
        if decision_value(d, cond.var) == resolve_anchor(inst, cond.var, cond.anchor):
            return True
    return False


def advance(inst: Instance, pending: PendingSet, t: int, d: Decision) -> PendingSet | None:
    """Advance the pending set across the period-``t`` decision ``d``.

    Returns the successor pending set, or ``None`` when a pending constraint
    at its deadline is left unsatisfied (a dead end: every condition time has
    passed, so the product can no longer reach zero).
    """
    cons = inst.constraints
    sat = frozenset(c.id for c in cons if satisfied_at(inst, c, t, d))
    if (pending & deadline_set(cons, t - 1)) - sat:
        return None
    newly = relevant_set(cons, t) - relevant_set(cons, t - 1)
    return (pending - sat) | (newly - sat)


@dataclass(frozen=True)
class ConstraintTables:
    """Precompiled per-layer constraint index for the network build.

    ``relevant[t]`` and ``newly_relevant[t]`` are indexed by layer 0..T;
    ``deadline[t]`` holds the constraints whose last chance is the arc into
    layer t+1.
    """

    relevant: tuple[PendingSet, ...]
    newly_relevant: tuple[PendingSet, ...]
    deadline: tuple[PendingSet, ...]
    thickness: int

    @property
    def initial_pending(self) -> PendingSet:
        return self.relevant[0]


def compile_tables(inst: Instance) -> ConstraintTables:
    cons = inst.constraints
    relevant = tuple(relevant_set(cons, t) for t in range(inst.T + 1))
    newly = tuple(
        relevant[t] - (relevant[t - 1] if t else frozenset()) for t in range(inst.T + 1)
    )
    deadline = tuple(deadline_set(cons, t) for t in range(inst.T + 1))
    return ConstraintTables(
        relevant=relevant,
        newly_relevant=newly,
        deadline=deadline,
        thickness=thickness(cons),
    )

"""Stock candidate sets: the levels the optimal trajectory can visit.

At an extreme point of the feasible region every stock level is a signed
sum of trade bounds around one of a few base values K (zero, the initial
stock, or a stock window endpoint).  Two constructions are provided:

* ``exact_stock_set`` computes that signed-sum set literally, as a closure
  over the bound alphabet with reachability pruning.  Always complete, may
  be large.
* ``lattice_stock_set`` exploits declared bound structure (every bound a
  short combination of basis steps) to replace the closure by a box of
  basis-coefficient sums, with the pre-clip cardinality bound
  (2T+2) * (2VT*gamma+1)^k.

Both clip per period to the stock windows and pin layer 0 to {s0}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import CapExceeded, Finding, Instance, InstanceError

__all__ = [
    "DEFAULT_PERIOD_CAP",
    "StockCandidateSet",
    "exact_stock_set",
    "lattice_stock_set",
    "safe_beta_range",
]

DEFAULT_PERIOD_CAP = 200_000


@dataclass(frozen=True)
class StockCandidateSet:
    """Per-layer candidate stock levels (scaled ints, sorted ascending).

    ``per_period[0]`` is always exactly ``(s0,)``; ``per_period[t]`` for
    t >= 1 is clipped to the period-t stock window.  ``pre_clip_size`` is
    the cardinality of the unclipped value set the construction produced.
    """

    per_period: tuple[tuple[int, ...], ...]
    mode: str
    pre_clip_size: int

    def size(self, t: int) -> int:
        return len(self.per_period[t])

    @property
    def union_size(self) -> int:
        return len(set().union(*map(set, self.per_period))) if self.per_period else 0

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.per_period)


def _base_values(inst: Instance) -> list[int]:
    # K ranges over 0, s0 and every stock window endpoint
    ks = {0, inst.s0}
    ks.update(inst.stock_lo)
    ks.update(inst.stock_hi)
    return sorted(ks)


def _clip(inst: Instance, values: set[int]) -> tuple[tuple[int, ...], ...]:
    levels: list[tuple[int, ...]] = [(inst.s0,)]
    ordered = sorted(values)
    for t in range(1, inst.T + 1):
        lo, hi = inst.stock_window(t)
        levels.append(tuple(v for v in ordered if lo <= v <= hi))
    return tuple(levels)


def safe_beta_range(inst: Instance) -> int:
    """Coefficient range guaranteed to cover every signed-sum candidate.

    The signed sum draws one coefficient per trade-bound slot (four per
    vendor-period) plus one per explicit anchor occurrence, each expanding
    to at most gamma basis steps, so a per-basis coefficient can reach
    (4VT + E) * gamma.  The default VT*gamma box is usually far smaller and
    usually enough; use this when provable coverage matters more than size.
    """
    if inst.lattice is None:
        raise InstanceError([Finding("lattice", "lattice", "instance declares no lattice")])
    explicit = sum(
        1 for con in inst.constraints for cond in con.conditions if cond.anchor.tag == "explicit"
    )
    return (4 * inst.V * inst.T + explicit) * inst.lattice.gamma


def lattice_stock_set(
    inst: Instance,
    *,
    beta_range: int | None = None,
    period_cap: int = DEFAULT_PERIOD_CAP,
) -> StockCandidateSet:
    """Candidate set from the declared lattice: K plus a coefficient box.

    Coefficients beta_i range over [-beta_range, beta_range] per basis
    entry, defaulting to V*T*gamma.  Raises :class:`InstanceError` when the
    instance declares no lattice and :class:`CapExceeded` when the pre-clip
    enumeration would exceed ``period_cap`` values.
    """
    lat = inst.lattice
    if lat is None:
        raise InstanceError([Finding("lattice", "lattice", "instance declares no lattice")])
    B = inst.V * inst.T * lat.gamma if beta_range is None else beta_range
    if B < 0:
        raise InstanceError([Finding("lattice", "beta_range", "coefficient range must be nonnegative")])
    ks = _base_values(inst)
    k = len(lat.basis)
    predicted = len(ks) * (2 * B + 1) ** k
    if predicted > period_cap:
        raise CapExceeded("lattice candidate enumeration", period_cap, predicted)
    offsets = {0}
    for d in lat.basis:
        offsets = {o + b * d for o in offsets for b in range(-B, B + 1)}
    values = {base + o for base in ks for o in offsets}
    return StockCandidateSet(per_period=_clip(inst, values), mode="lattice", pre_clip_size=len(values))


def exact_stock_set(inst: Instance, cap: int = DEFAULT_PERIOD_CAP) -> StockCandidateSet:
    """The literal signed-sum candidate set, built as a pruned closure.

    Starting from all base values K, each bound slot (Lx, Ux, Ly, Uy per
    vendor-period, plus each explicit anchor occurrence) contributes its
    value with coefficient -1, 0 or +1: one pass per slot replaces Z by
    Z u (Z+b) u (Z-b).  Partial sums that cannot re-enter the widest stock
    window given the remaining slots' total magnitude are pruned.  Raises
    :class:`CapExceeded` when the working set exceeds ``cap``.
    """
    alphabet: list[int] = []
    for rows in inst.vendors:
        for b in rows:
            for value in (b.Lx, b.Ux, b.Ly, b.Uy):
                if value != 0:
                    alphabet.append(value)
    for con in inst.constraints:
        for cond in con.conditions:
            if cond.anchor.tag == "explicit" and cond.anchor.value:
                alphabet.append(cond.anchor.value)

    if inst.T == 0:
        return StockCandidateSet(per_period=((inst.s0,),), mode="exact", pre_clip_size=1)

    win_lo = min(inst.stock_lo)
    win_hi = max(inst.stock_hi)
    remaining = [0] * (len(alphabet) + 1)
    for i in range(len(alphabet) - 1, -1, -1):
        remaining[i] = remaining[i + 1] + abs(alphabet[i])

    work = set(_base_values(inst))
    for i, b in enumerate(alphabet):
        slack = remaining[i + 1]
        lo, hi = win_lo - slack, win_hi + slack
        grown = set()
        for z in work:
            for nz in (z, z + b, z - b):
                if lo <= nz <= hi:
                    grown.add(nz)
        work = grown
        if len(work) > cap:
            raise CapExceeded("exact candidate closure", cap, len(work))
    return StockCandidateSet(per_period=_clip(inst, work), mode="exact", pre_clip_size=len(work))

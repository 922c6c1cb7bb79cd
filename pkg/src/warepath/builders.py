"""Instance builders for common market patterns.

Each builder emits a :class:`MarketBlock`, a group of vendors plus the
complementarity constraints wiring them together, with vendor indices local
to the block.  :func:`assemble_instance` concatenates blocks into a full
instance document (plain dict, ready for ``load_instance`` or JSON dump),
shifting constraint vendor references onto global positions.

Patterns: tiered purchase pricing (convex piecewise-linear cost via chained
fill-this-tier-first constraints), discrete operating levels with ramp
restrictions (pairwise exclusions plus forbidden consecutive pairs), and
batch pricing in binary weights (logarithmically many all-or-nothing
vendors with minimal exclusion subsets).  :func:`reduce_time_dependent`
rewrites a single-vendor instance with time-varying bounds into a
many-vendor instance whose bounds are constant over time.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Sequence

from .model import (
    AnchorTag,
    BoundAnchor,
    ComplementarityConstraint,
    Condition,
    Finding,
    Instance,
    InstanceError,
    Kind,
    VarRef,
    VendorPeriodBounds,
    format_number,
    payoff_bounds,
)

__all__ = [
    "BlockCondition",
    "MarketBlock",
    "PeriodSpec",
    "assemble_instance",
    "build_batch_pricing",
    "build_ramp",
    "build_tiered_purchase",
    "reduce_time_dependent",
    "reduction_big_m",
    "sale_vendor",
    "uniform_vendor",
]

Rational = int | str | Fraction

_ZERO = Fraction(0)


def _rat(value: Rational) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class PeriodSpec:
    """One vendor-period in builder (unscaled rational) form."""

    Lx: Fraction = _ZERO
    Ux: Fraction = _ZERO
    Ly: Fraction = _ZERO
    Uy: Fraction = _ZERO
    cx: Fraction = _ZERO
    ry: Fraction = _ZERO
    fx: Fraction = _ZERO
    fy: Fraction = _ZERO


@dataclass(frozen=True)
class BlockCondition:
    """One condition with a block-local (1-based) vendor index."""

    kind: Kind
    vendor: int
    time: int
    anchor: AnchorTag
    value: Fraction | None = None


@dataclass(frozen=True)
class MarketBlock:
    """Vendors plus the constraints tying them together, indices local."""

    T: int
    vendors: tuple[tuple[PeriodSpec, ...], ...]
    constraints: tuple[tuple[BlockCondition, ...], ...] = ()


def uniform_vendor(T: int, **coeffs: Rational) -> MarketBlock:
    """A one-vendor block with the same spec every period."""
    spec = PeriodSpec(**{key: _rat(value) for key, value in coeffs.items()})
    return MarketBlock(T=T, vendors=((spec,) * T,))


def sale_vendor(T: int, price: Rational, cap: Rational, periods: Sequence[int] | None = None) -> MarketBlock:
    """A one-vendor block that only sells, optionally in selected periods."""
    active = set(range(1, T + 1)) if periods is None else set(periods)
    row = tuple(
        PeriodSpec(Uy=_rat(cap), ry=_rat(price)) if t in active else PeriodSpec()
        for t in range(1, T + 1)
    )
    return MarketBlock(T=T, vendors=(row,))


def assemble_instance(
    s0: Rational,
    stock_bounds: Sequence[tuple[Rational, Rational]] | tuple[Rational, Rational],
    blocks: Sequence[MarketBlock],
    *,
    stock_payoff: Sequence[Sequence[tuple[Rational, Rational]]] | None = None,
    lattice: tuple[Sequence[Rational], int] | None = None,
) -> dict[str, Any]:
    """Concatenate blocks into a full instance document.

    ``stock_bounds`` is either one (L, U) pair applied to every period or a
    per-period sequence; its length fixes the horizon, which every block
    must match.  Constraint vendor indices are shifted block by block.
    """
    if not blocks:
        raise InstanceError([Finding("builder", "blocks", "need at least one block")])
    horizons = {block.T for block in blocks}
    if len(horizons) != 1:
        raise InstanceError([Finding("builder", "blocks", f"mixed horizons {sorted(horizons)}")])
    T = horizons.pop()
    is_uniform = (
        isinstance(stock_bounds, Sequence)
        and len(stock_bounds) == 2
        and not isinstance(stock_bounds[0], (list, tuple))
        and not isinstance(stock_bounds[1], (list, tuple))
    )
    if is_uniform:
        bounds = [(_rat(stock_bounds[0]), _rat(stock_bounds[1]))] * T
    else:
        bounds = [(_rat(lo), _rat(hi)) for lo, hi in stock_bounds]
    if len(bounds) != T:
        raise InstanceError([Finding("builder", "stock_bounds", f"expected {T} periods, got {len(bounds)}")])

    vendors_doc = []
    constraints_doc = []
    offset = 0
    for block in blocks:
        for row in block.vendors:
            vendors_doc.append(
                {
                    "periods": [
                        {
                            "Lx": format_number(p.Lx),
                            "Ux": format_number(p.Ux),
                            "Ly": format_number(p.Ly),
                            "Uy": format_number(p.Uy),
                            "cx": format_number(p.cx),
                            "ry": format_number(p.ry),
                            "fx": format_number(p.fx),
                            "fy": format_number(p.fy),
                        }
                        for p in row
                    ]
                }
            )
        for conditions in block.constraints:
            constraints_doc.append(
                {
                    "conditions": [
                        {
                            "kind": c.kind,
                            "vendor": c.vendor + offset,
                            "time": c.time,
                            "anchor": c.anchor,
                            **({"value": format_number(c.value)} if c.anchor == "explicit" else {}),
                        }
                        for c in conditions
                    ]
                }
            )
        offset += len(block.vendors)

    doc: dict[str, Any] = {
        "T": T,
        "V": offset,
        "s0": format_number(_rat(s0)),
        "stock_bounds": [{"L": format_number(lo), "U": format_number(hi)} for lo, hi in bounds],
        "vendors": vendors_doc,
    }
    if lattice is not None:
        basis, gamma = lattice
        doc["lattice"] = {"basis": [format_number(_rat(d)) for d in basis], "gamma": gamma}
    if stock_payoff is not None:
        doc["stock_payoff"] = [
            {"pieces": [{"slope": format_number(_rat(a)), "intercept": format_number(_rat(b))} for a, b in row]}
            for row in stock_payoff
        ]
    doc["constraints"] = constraints_doc
    return doc


def build_tiered_purchase(tiers: Sequence[tuple[Rational, Rational]], T: int) -> MarketBlock:
    """Convex tiered pricing: cheap units first, then surged rates.

    ``tiers`` lists (cumulative capacity, unit cost) with both strictly
    increasing; vendor j sells the slice between consecutive capacities and
    a chain constraint per period forces tier j to be full before tier j+1
    opens (either x_j sits at its cap or x_{j+1} is zero).
    """
    if not tiers:
        raise InstanceError([Finding("builder", "tiers", "need at least one tier")])
    caps = [_rat(cap) for cap, _ in tiers]
    costs = [_rat(cost) for _, cost in tiers]
    if caps[0] <= 0 or any(b <= a for a, b in zip(caps, caps[1:])):
        raise InstanceError([Finding("builder", "tiers", "capacities must be positive and strictly increasing")])
    if any(b <= a for a, b in zip(costs, costs[1:])):
        raise InstanceError(
            [Finding("builder", "tiers", "unit costs must be strictly increasing across tiers")]
        )
    widths = [caps[0]] + [b - a for a, b in zip(caps, caps[1:])]
    vendors = tuple(
        tuple(PeriodSpec(Ux=width, cx=cost) for _ in range(T))
        for width, cost in zip(widths, costs)
    )
    constraints = tuple(
        (
            BlockCondition(kind="purchase", vendor=j + 1, time=t, anchor="upper"),
            BlockCondition(kind="purchase", vendor=j + 2, time=t, anchor="zero"),
        )
        for t in range(1, T + 1)
        for j in range(len(tiers) - 1)
    )
    return MarketBlock(T=T, vendors=vendors, constraints=constraints)


def build_ramp(
    levels: Sequence[tuple[Rational, Rational]],
    forbidden_pairs: Sequence[tuple[int, int]],
    T: int,
) -> MarketBlock:
    """Discrete operating levels with forbidden consecutive transitions.

    Each level is an all-or-nothing purchase vendor (Lx = Ux = quantity).
    Per period, every pair of levels is mutually exclusive; per period
    boundary, each forbidden pair (1-based level indices) is excluded in
    both orders.
    """
    if not levels:
        raise InstanceError([Finding("builder", "levels", "need at least one level")])
    n = len(levels)
    for a, b in forbidden_pairs:
        if not (1 <= a <= n and 1 <= b <= n) or a == b:
            raise InstanceError([Finding("builder", "forbidden_pairs", f"bad pair ({a}, {b})")])
    vendors = tuple(
        tuple(PeriodSpec(Lx=_rat(quantity), Ux=_rat(quantity), cx=_rat(cost)) for _ in range(T))
        for quantity, cost in levels
    )
    constraints: list[tuple[BlockCondition, ...]] = []
    for t in range(1, T + 1):
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                constraints.append(
                    (
                        BlockCondition(kind="purchase", vendor=a, time=t, anchor="zero"),
                        BlockCondition(kind="purchase", vendor=b, time=t, anchor="zero"),
                    )
                )
    for t in range(1, T):
        for a, b in forbidden_pairs:
            for first, second in ((a, b), (b, a)):
                constraints.append(
                    (
                        BlockCondition(kind="purchase", vendor=first, time=t, anchor="zero"),
                        BlockCondition(kind="purchase", vendor=second, time=t + 1, anchor="zero"),
                    )
                )
    return MarketBlock(T=T, vendors=vendors, constraints=tuple(constraints))


def build_batch_pricing(
    batch_size: Rational,
    max_batches: int,
    cost: Rational | Sequence[Rational],
    T: int,
) -> MarketBlock:
    """Batch purchasing in binary weights: k = ceil(log2(M+1)) vendors.

    Vendor i trades exactly 2^i batches or nothing (Lx = Ux = 2^i * U) for
    a fixed charge of 2^i times the per-batch cost; unit cost stays zero.
    Exclusion constraints forbid exactly the minimal vendor subsets whose
    batch totals exceed M, which caps every feasible total at M batches.
    """
    U = _rat(batch_size)
    if U <= 0:
        raise InstanceError([Finding("builder", "batch_size", "must be positive")])
    if max_batches < 1:
        raise InstanceError([Finding("builder", "max_batches", "must be at least 1")])
    k = max_batches.bit_length()
    costs = [_rat(c) for c in cost] if isinstance(cost, Sequence) and not isinstance(cost, str) else [_rat(cost)] * T
    if len(costs) != T:
        raise InstanceError([Finding("builder", "cost", f"expected {T} per-period costs, got {len(costs)}")])
    vendors = tuple(
        tuple(PeriodSpec(Lx=(1 << i) * U, Ux=(1 << i) * U, fx=(1 << i) * c) for c in costs)
        for i in range(k)
    )
    minimal: list[tuple[int, ...]] = []
    for mask in range(1, 1 << k):
        total = 0
        for i in range(k):
            if mask >> i & 1:
                total += 1 << i
        if total <= max_batches:
            continue
        lowest = (mask & -mask).bit_length() - 1
        if total - (1 << lowest) <= max_batches:
            # dropping the cheapest member already fits, so no proper
            # violating subset exists: this one is minimal
            minimal.append(tuple(i for i in range(k - 1, -1, -1) if mask >> i & 1))
    minimal.sort()
    constraints = tuple(
        tuple(BlockCondition(kind="purchase", vendor=i + 1, time=t, anchor="zero") for i in subset)
        for t in range(1, T + 1)
        for subset in minimal
    )
    return MarketBlock(T=T, vendors=vendors, constraints=constraints)


def reduction_big_m(inst: Instance) -> Fraction:
    """Deterrent fixed charge for :func:`reduce_time_dependent`.

    Large enough that a schedule paying it even once stays below every
    schedule that does not: one plus the gross sale revenue bound and the
    whole payoff span of both the original and the widened instance
    (whichever is largest).
    """
    gross = sum(
        (b.ry * inst.to_fraction(b.Uy) for rows in inst.vendors for b in rows if b.ry > 0),
        Fraction(0),
    )
    lo, hi = payoff_bounds(inst)
    widened = _reduced_skeleton(inst)
    wlo, whi = payoff_bounds(widened)
    return 1 + max(gross, hi - lo, whi - lo, _ZERO)


def _reduced_skeleton(inst: Instance) -> Instance:
    """The reduced instance before deterrent charges are applied."""
    rows = inst.vendors[0]
    vendors = tuple(
        tuple(rows[i] for _ in range(inst.T))  # vendor i+1 repeats its period everywhere
        for i in range(inst.T)
    )
    constraints = tuple(
        ComplementarityConstraint(
            id=con.id,
            conditions=tuple(
                Condition(
                    var=VarRef(kind=c.var.kind, vendor=c.var.time, time=c.var.time),
                    anchor=c.anchor,
                )
                for c in con.conditions
            ),
        )
        for con in inst.constraints
    )
    return replace(inst, V=inst.T, vendors=vendors, constraints=constraints)


def reduce_time_dependent(inst: Instance) -> Instance:
    """Trade time-dependent bounds for more vendors.

    Vendor i of the output carries the input's period-i bounds and
    coefficients in every period, so its bounds are constant over time;
    trading with vendor i outside period i incurs a deterrent fixed charge
    that no optimal schedule pays.  Constraint conditions move from
    (vendor 1, period t) to (vendor t, period t).  Optimal objectives
    coincide whenever the input is feasible.
    """
    if inst.V != 1:
        raise InstanceError([Finding("builder", "V", "reduction applies to single-vendor instances")])
    if inst.T == 0:
        return inst
    big_m = reduction_big_m(inst)
    skeleton = _reduced_skeleton(inst)
    vendors = tuple(
        tuple(
            row if t == i else replace(row, fx=row.fx + big_m, fy=row.fy + big_m)
            for t, row in enumerate(rows)
        )
        for i, rows in enumerate(skeleton.vendors)
    )
    return replace(skeleton, vendors=vendors)

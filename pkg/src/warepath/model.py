"""Problem data model: exact quantities, document parsing, payoff evaluation,
and whole-solution feasibility auditing.

A problem instance describes a trading horizon of ``T`` periods over one
stock account and ``V`` vendors.  Each period every vendor may receive a
purchase ``x`` and a sale ``y``, each either exactly zero or inside a closed
interval (the semi-continuous domain ``{0} ∪ [L, U]``).  Stock follows the
balance ``s_t = s_{t-1} - Σ_v y_{v,t} + Σ_v x_{v,t}``, sales in a period are
limited by the stock on hand at its start, and optional complementarity
constraints require at least one of several variable/anchor equalities to
hold.

Exactness policy: every quantity (bounds, stock levels, trade volumes,
anchor values, lattice basis) is stored as an integer on a common scale.
``Instance.scale`` holds the least common denominator ``D`` of all rational
quantity inputs, and a stored integer ``q`` means the true value ``q / D``.
Payoff coefficients and objectives are ``fractions.Fraction`` values.
Feasibility logic never touches floating point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Iterator, Literal, Mapping, Sequence

Kind = Literal["purchase", "sale"]
AnchorTag = Literal["zero", "lower", "upper", "explicit"]

# Guardrail on the common denominator: beyond this the scaled integers stop
# being a sane representation and the document is almost certainly malformed.
MAX_SCALE = 10**18

__all__ = [
    "AnchorTag",
    "AuditReport",
    "BoundAnchor",
    "CapExceeded",
    "ComplementarityConstraint",
    "Condition",
    "Decision",
    "Finding",
    "Instance",
    "InstanceError",
    "Kind",
    "LatticeSpec",
    "PayoffTable",
    "Solution",
    "SolutionError",
    "StockPayoffPiece",
    "ValidationReport",
    "VarRef",
    "VendorPeriodBounds",
    "check_feasible",
    "decision_value",
    "dump_instance",
    "dump_solution",
    "evaluate_payoff",
    "format_number",
    "format_ratio",
    "instance_document",
    "lattice_representable",
    "load_instance",
    "load_solution",
    "parse_rational",
    "payoff_bounds",
    "resolve_anchor",
    "solution_document",
    "stock_payoff_value",
    "validate_instance",
]


# ---------------------------------------------------------------------------
# Errors and findings


@dataclass(frozen=True)
class Finding:
    """One diagnostic: a machine-readable code, a document path, a message."""

    code: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.path}: {self.message}"


class InstanceError(ValueError):
    """A problem document is malformed or violates a model invariant."""

    def __init__(self, findings: Iterable[Finding]):
        self.findings = list(findings)
        super().__init__("; ".join(str(f) for f in self.findings) or "invalid instance")


class SolutionError(ValueError):
    """A solution document does not parse or does not fit its instance."""

    def __init__(self, findings: Iterable[Finding]):
        self.findings = list(findings)
        super().__init__("; ".join(str(f) for f in self.findings) or "invalid solution")


class CapExceeded(RuntimeError):
    """An enumeration or network construction outgrew its configured cap."""

    def __init__(self, what: str, cap: int, reached: int):
        self.what = what
        self.cap = cap
        self.reached = reached
        super().__init__(f"{what}: cap {cap} exceeded (reached {reached})")


# ---------------------------------------------------------------------------
# Rational parsing and formatting


def parse_rational(value: Any, path: str = "value") -> Fraction:
    """Parse a document number: an int, or a string like ``"3/4"``.

    Floats are rejected outright so that inexact values can never leak in;
    non-integer rationals must be spelled as strings.
    """
    if isinstance(value, bool):
        raise InstanceError([Finding("parse", path, "expected a number, got a boolean")])
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InstanceError(
            [Finding("parse", path, "floats are not accepted; write non-integers as 'p/q' strings")]
        )
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InstanceError([Finding("parse", path, f"not a rational: {value!r}")]) from None
    raise InstanceError(
        [Finding("parse", path, f"expected int or 'p/q' string, got {type(value).__name__}")]
    )


def format_number(q: Fraction) -> int | str:
    """Serialize a rational: a bare int when integral, else ``"p/q"`` coprime."""
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


def format_ratio(q: Fraction) -> str:
    """Serialize a rational always in ``"p/q"`` form (q > 0, gcd(p, q) = 1)."""
    return f"{q.numerator}/{q.denominator}"


def _parse_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError([Finding("parse", path, "expected an integer")])
    return value


# ---------------------------------------------------------------------------
# Core types


@dataclass(frozen=True)
class VendorPeriodBounds:
    """Trade limits and payoff coefficients of one vendor in one period.

    Bounds (Lx, Ux, Ly, Uy) are scaled integers; a purchase must equal 0 or
    lie in [Lx, Ux], a sale likewise in [Ly, Uy].  cx and ry are per-unit
    cost/revenue in true (unscaled) units; fx and fy are fixed charges paid
    whenever the matching indicator is set.
    """

    Lx: int
    Ux: int
    Ly: int
    Uy: int
    cx: Fraction = Fraction(0)
    ry: Fraction = Fraction(0)
    fx: Fraction = Fraction(0)
    fy: Fraction = Fraction(0)


@dataclass(frozen=True)
class StockPayoffPiece:
    """One affine piece of a convex end-of-period stock payoff."""

    slope: Fraction
    intercept: Fraction


@dataclass(frozen=True)
class VarRef:
    """Reference to one trade variable: purchase or sale of vendor v at period t (1-based)."""

    kind: Kind
    vendor: int
    time: int


@dataclass(frozen=True)
class BoundAnchor:
    """Target value a condition compares against.

    ``zero``, ``lower`` and ``upper`` resolve against the referenced
    variable's own bounds; ``explicit`` carries its own scaled value.
    """

    tag: AnchorTag
    value: int | None = None


@dataclass(frozen=True)
class Condition:
    var: VarRef
    anchor: BoundAnchor


@dataclass(frozen=True)
class ComplementarityConstraint:
    """A disjunction of equalities: at least one condition must hold exactly.

    Equivalently the product of the condition residuals is zero.  Arity is
    at least two; the classic either/or pair is the arity-2 case.
    """

    id: int
    conditions: tuple[Condition, ...]

    @property
    def t_min(self) -> int:
        return min(c.var.time for c in self.conditions)

    @property
    def t_max(self) -> int:
        return max(c.var.time for c in self.conditions)


@dataclass(frozen=True)
class LatticeSpec:
    """Generator basis (scaled, positive) and coefficient budget gamma.

    When present, every trade bound and explicit anchor must be a signed
    combination sum(alpha_i * d_i) with |alpha_i| <= gamma.
    """

    basis: tuple[int, ...]
    gamma: int


@dataclass(frozen=True)
class Instance:
    """A complete problem instance with all quantities on a common scale."""

    T: int
    V: int
    s0: int
    stock_lo: tuple[int, ...]
    stock_hi: tuple[int, ...]
    vendors: tuple[tuple[VendorPeriodBounds, ...], ...]
    stock_payoff: tuple[tuple[StockPayoffPiece, ...], ...]
    constraints: tuple[ComplementarityConstraint, ...]
    lattice: LatticeSpec | None
    scale: int

    def bounds(self, v: int, t: int) -> VendorPeriodBounds:
        """Bounds of vendor ``v`` at period ``t`` (both 1-based)."""
        return self.vendors[v - 1][t - 1]

    def var_bounds(self, var: VarRef) -> tuple[int, int]:
        b = self.bounds(var.vendor, var.time)
        return (b.Lx, b.Ux) if var.kind == "purchase" else (b.Ly, b.Uy)

    def stock_window(self, t: int) -> tuple[int, int]:
        """Stock bounds at the end of period ``t`` (1-based)."""
        return self.stock_lo[t - 1], self.stock_hi[t - 1]

    def to_fraction(self, q: int) -> Fraction:
        """True value of a scaled quantity."""
        return Fraction(q, self.scale)


@dataclass(frozen=True)
class Decision:
    """All trades of one period: per-vendor purchases, sales, indicators.

    Indicators default to the only values an optimal schedule can use
    (w = 1 iff x > 0, z = 1 iff y > 0); pass them explicitly only to model
    a schedule that wastes fixed charges.
    """

    x: tuple[int, ...]
    y: tuple[int, ...]
    w: tuple[int, ...] | None = None
    z: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.w is None:
            object.__setattr__(self, "w", tuple(1 if q > 0 else 0 for q in self.x))
        if self.z is None:
            object.__setattr__(self, "z", tuple(1 if q > 0 else 0 for q in self.y))

    @property
    def sort_key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Solution:
    """A full schedule: stock trajectory, per-period decisions, objective."""

    stocks: tuple[int, ...]
    decisions: tuple[Decision, ...]
    objective: Fraction


def decision_value(d: Decision, var: VarRef) -> int:
    return d.x[var.vendor - 1] if var.kind == "purchase" else d.y[var.vendor - 1]


def resolve_anchor(inst: Instance, var: VarRef, anchor: BoundAnchor) -> int:
    """Scaled value a condition's variable is compared against."""
    if anchor.tag == "zero":
        return 0
    if anchor.tag == "explicit":
        assert anchor.value is not None
        return anchor.value
    lo, hi = inst.var_bounds(var)
    return lo if anchor.tag == "lower" else hi


# ---------------------------------------------------------------------------
# Lattice representability (Assumption on bound structure)


def lattice_representable(value: int, basis: Sequence[int], gamma: int) -> bool:
    """True iff ``value`` equals sum(alpha_i * d_i) with |alpha_i| <= gamma.

    Exhaustive search with suffix-range pruning; the basis is small in
    practice (the search is O((2*gamma+1)^k) in the worst case).
    """
    k = len(basis)
    if k == 1:
        d = basis[0]
        return value % d == 0 and abs(value) <= gamma * d
    suffix = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix[i] = suffix[i + 1] + gamma * abs(basis[i])
    seen: set[tuple[int, int]] = set()

    def rec(i: int, remaining: int) -> bool:
        if i == k:
            return remaining == 0
        if abs(remaining) > suffix[i]:
            return False
        key = (i, remaining)
        if key in seen:
            return False
        seen.add(key)
        d = basis[i]
        for a in range(-gamma, gamma + 1):
            if rec(i + 1, remaining - a * d):
                return True
        return False

    return rec(0, value)


# ---------------------------------------------------------------------------
# Document parsing


def _collect_denominators(fractions: Iterable[Fraction]) -> int:
    d = 1
    for q in fractions:
        d = math.lcm(d, q.denominator)
    return d


def load_instance(document: str | bytes | Mapping[str, Any]) -> Instance:
    """Parse an instance document (JSON text or an already-parsed mapping).

    Computes the common scale, converts every quantity to a scaled integer,
    and validates; raises :class:`InstanceError` carrying all hard findings.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InstanceError([Finding("parse", "$", f"invalid JSON: {exc}")]) from None
    else:
        doc = document
    if not isinstance(doc, Mapping):
        raise InstanceError([Finding("parse", "$", "expected a JSON object")])

    unknown = set(doc) - {"T", "V", "s0", "stock_bounds", "vendors", "lattice", "stock_payoff", "constraints"}
    if unknown:
        raise InstanceError(
            [Finding("parse", "$", f"unknown keys: {', '.join(sorted(unknown))}")]
        )
    for key in ("T", "V", "s0", "stock_bounds", "vendors"):
        if key not in doc:
            raise InstanceError([Finding("parse", "$", f"missing required key {key!r}")])

    T = _parse_int(doc["T"], "T")
    V = _parse_int(doc["V"], "V")
    if T < 0 or V < 0:
        raise InstanceError([Finding("parse", "T" if T < 0 else "V", "must be nonnegative")])

    quantities: list[Fraction] = []

    def qty(value: Any, path: str) -> Fraction:
        q = parse_rational(value, path)
        quantities.append(q)
        return q

    s0 = qty(doc["s0"], "s0")

    raw_bounds = doc["stock_bounds"]
    if not isinstance(raw_bounds, Sequence) or isinstance(raw_bounds, (str, bytes)) or len(raw_bounds) != T:
        raise InstanceError([Finding("parse", "stock_bounds", f"expected an array of length {T}")])
    stock_lo_q, stock_hi_q = [], []
    for t, entry in enumerate(raw_bounds, start=1):
        if not isinstance(entry, Mapping):
            raise InstanceError([Finding("parse", f"stock_bounds[{t-1}]", "expected an object with L and U")])
        stock_lo_q.append(qty(entry.get("L"), f"stock_bounds[{t-1}].L"))
        stock_hi_q.append(qty(entry.get("U"), f"stock_bounds[{t-1}].U"))

    raw_vendors = doc["vendors"]
    if not isinstance(raw_vendors, Sequence) or isinstance(raw_vendors, (str, bytes)) or len(raw_vendors) != V:
        raise InstanceError([Finding("parse", "vendors", f"expected an array of length {V}")])
    vendor_rows: list[list[dict[str, Fraction]]] = []
    for v, raw_vendor in enumerate(raw_vendors):
        vpath = f"vendors[{v}]"
        if not isinstance(raw_vendor, Mapping) or "periods" not in raw_vendor:
            raise InstanceError([Finding("parse", vpath, "expected an object with a 'periods' array")])
        raw_periods = raw_vendor["periods"]
        if not isinstance(raw_periods, Sequence) or len(raw_periods) != T:
            raise InstanceError([Finding("parse", f"{vpath}.periods", f"expected an array of length {T}")])
        rows = []
        for t, raw_period in enumerate(raw_periods):
            ppath = f"{vpath}.periods[{t}]"
            if not isinstance(raw_period, Mapping):
                raise InstanceError([Finding("parse", ppath, "expected an object")])
            row: dict[str, Fraction] = {}
            for key in ("Lx", "Ux", "Ly", "Uy"):
                row[key] = qty(raw_period.get(key, 0), f"{ppath}.{key}")
            for key in ("cx", "ry", "fx", "fy"):
                row[key] = parse_rational(raw_period.get(key, 0), f"{ppath}.{key}")
            rows.append(row)
        vendor_rows.append(rows)

    lattice_doc = doc.get("lattice")
    basis_q: list[Fraction] = []
    gamma = 0
    if lattice_doc is not None:
        if not isinstance(lattice_doc, Mapping) or "basis" not in lattice_doc or "gamma" not in lattice_doc:
            raise InstanceError([Finding("parse", "lattice", "expected an object with basis and gamma")])
        raw_basis = lattice_doc["basis"]
        if not isinstance(raw_basis, Sequence) or isinstance(raw_basis, (str, bytes)) or not raw_basis:
            raise InstanceError([Finding("parse", "lattice.basis", "expected a nonempty array")])
        basis_q = [qty(b, f"lattice.basis[{i}]") for i, b in enumerate(raw_basis)]
        gamma = _parse_int(lattice_doc["gamma"], "lattice.gamma")

    payoff_doc = doc.get("stock_payoff")
    payoff_rows: list[list[StockPayoffPiece]] = [[] for _ in range(T)]
    if payoff_doc is not None:
        if not isinstance(payoff_doc, Sequence) or len(payoff_doc) != T:
            raise InstanceError([Finding("parse", "stock_payoff", f"expected an array of length {T}")])
        for t, entry in enumerate(payoff_doc):
            gpath = f"stock_payoff[{t}]"
            if not isinstance(entry, Mapping) or "pieces" not in entry:
                raise InstanceError([Finding("parse", gpath, "expected an object with a 'pieces' array")])
            for i, piece in enumerate(entry["pieces"]):
                if not isinstance(piece, Mapping):
                    raise InstanceError([Finding("parse", f"{gpath}.pieces[{i}]", "expected an object")])
                payoff_rows[t].append(
                    StockPayoffPiece(
                        slope=parse_rational(piece.get("slope", 0), f"{gpath}.pieces[{i}].slope"),
                        intercept=parse_rational(piece.get("intercept", 0), f"{gpath}.pieces[{i}].intercept"),
                    )
                )

    constraints_doc = doc.get("constraints", [])
    if not isinstance(constraints_doc, Sequence) or isinstance(constraints_doc, (str, bytes)):
        raise InstanceError([Finding("parse", "constraints", "expected an array")])
    raw_constraints: list[list[tuple[Kind, int, int, AnchorTag, Fraction | None]]] = []
    for ci, raw_con in enumerate(constraints_doc):
        cpath = f"constraints[{ci}]"
        if not isinstance(raw_con, Mapping) or "conditions" not in raw_con:
            raise InstanceError([Finding("parse", cpath, "expected an object with a 'conditions' array")])
        conds: list[tuple[Kind, int, int, AnchorTag, Fraction | None]] = []
        for j, raw_cond in enumerate(raw_con["conditions"]):
            dpath = f"{cpath}.conditions[{j}]"
            if not isinstance(raw_cond, Mapping):
                raise InstanceError([Finding("parse", dpath, "expected an object")])
            kind = raw_cond.get("kind")
            if kind not in ("purchase", "sale"):
                raise InstanceError([Finding("parse", f"{dpath}.kind", "must be 'purchase' or 'sale'")])
            vendor = _parse_int(raw_cond.get("vendor"), f"{dpath}.vendor")
            time = _parse_int(raw_cond.get("time"), f"{dpath}.time")
            tag = raw_cond.get("anchor")
            if tag not in ("zero", "lower", "upper", "explicit"):
                raise InstanceError(
                    [Finding("parse", f"{dpath}.anchor", "must be zero, lower, upper or explicit")]
                )
            value: Fraction | None = None
            if tag == "explicit":
                if "value" not in raw_cond:
                    raise InstanceError([Finding("parse", f"{dpath}.value", "explicit anchor needs a value")])
                value = qty(raw_cond["value"], f"{dpath}.value")
            elif "value" in raw_cond:
                raise InstanceError(
                    [Finding("parse", f"{dpath}.value", "only explicit anchors carry a value")]
                )
            conds.append((kind, vendor, time, tag, value))
        raw_constraints.append(conds)

    scale = _collect_denominators(quantities)
    if scale > MAX_SCALE:
        raise InstanceError(
            [Finding("scale", "$", f"common denominator {scale} exceeds the {MAX_SCALE} guardrail")]
        )

    def scaled(q: Fraction) -> int:
        r = q * scale
        assert r.denominator == 1
        return r.numerator

    vendors = tuple(
        tuple(
            VendorPeriodBounds(
                Lx=scaled(row["Lx"]),
                Ux=scaled(row["Ux"]),
                Ly=scaled(row["Ly"]),
                Uy=scaled(row["Uy"]),
                cx=row["cx"],
                ry=row["ry"],
                fx=row["fx"],
                fy=row["fy"],
            )
            for row in rows
        )
        for rows in vendor_rows
    )
    constraints = tuple(
        ComplementarityConstraint(
            id=ci,
            conditions=tuple(
                Condition(
                    var=VarRef(kind=kind, vendor=vendor, time=time),
                    anchor=BoundAnchor(tag=tag, value=None if value is None else scaled(value)),
                )
                for (kind, vendor, time, tag, value) in conds
            ),
        )
        for ci, conds in enumerate(raw_constraints)
    )
    inst = Instance(
        T=T,
        V=V,
        s0=scaled(s0),
        stock_lo=tuple(scaled(q) for q in stock_lo_q),
        stock_hi=tuple(scaled(q) for q in stock_hi_q),
        vendors=vendors,
        stock_payoff=tuple(tuple(row) for row in payoff_rows),
        constraints=constraints,
        lattice=LatticeSpec(basis=tuple(scaled(b) for b in basis_q), gamma=gamma) if lattice_doc else None,
        scale=scale,
    )
    report = validate_instance(inst)
    if report.errors:
        raise InstanceError(report.errors)
    return inst


def instance_document(inst: Instance) -> dict[str, Any]:
    """Serialize an instance back to its canonical document form."""
    tf = inst.to_fraction
    doc: dict[str, Any] = {
        "T": inst.T,
        "V": inst.V,
        "s0": format_number(tf(inst.s0)),
        "stock_bounds": [
            {"L": format_number(tf(lo)), "U": format_number(tf(hi))}
            for lo, hi in zip(inst.stock_lo, inst.stock_hi)
        ],
        "vendors": [
            {
                "periods": [
                    {
                        "Lx": format_number(tf(b.Lx)),
                        "Ux": format_number(tf(b.Ux)),
                        "Ly": format_number(tf(b.Ly)),
                        "Uy": format_number(tf(b.Uy)),
                        "cx": format_number(b.cx),
                        "ry": format_number(b.ry),
                        "fx": format_number(b.fx),
                        "fy": format_number(b.fy),
                    }
                    for b in rows
                ]
            }
            for rows in inst.vendors
        ],
    }
    if inst.lattice is not None:
        doc["lattice"] = {
            "basis": [format_number(tf(d)) for d in inst.lattice.basis],
            "gamma": inst.lattice.gamma,
        }
    if any(inst.stock_payoff):
        doc["stock_payoff"] = [
            {"pieces": [{"slope": format_number(p.slope), "intercept": format_number(p.intercept)} for p in row]}
            for row in inst.stock_payoff
        ]
    doc["constraints"] = [
        {
            "conditions": [
                {
                    "kind": c.var.kind,
                    "vendor": c.var.vendor,
                    "time": c.var.time,
                    "anchor": c.anchor.tag,
                    **({"value": format_number(tf(c.anchor.value))} if c.anchor.tag == "explicit" else {}),
                }
                for c in con.conditions
            ]
        }
        for con in inst.constraints
    ]
    return doc


def dump_instance(inst: Instance) -> str:
    """Canonical JSON text for an instance (stable bytes for stable input)."""
    return json.dumps(instance_document(inst), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Validation


@dataclass
class ValidationReport:
    errors: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_instance(
    inst: Instance,
    *,
    vendor_budget: int | None = None,
    thickness_budget: int | None = None,
) -> ValidationReport:
    """Check model invariants; return hard errors, advisory warnings, stats.

    Hard errors: negative or inverted bounds, out-of-range constraint
    references, arity below two, explicit anchors without values or negative,
    and (when a lattice is declared) any bound or explicit anchor that is not
    representable within the coefficient budget.

    Warnings: vendor count or constraint thickness above the supplied
    budgets.  Stats include thickness and the predicted candidate-set and
    network-size bounds.
    """
    report = ValidationReport()
    err = report.errors.append

    if inst.s0 < 0:
        err(Finding("bounds", "s0", "initial stock must be nonnegative"))
    for t in range(inst.T):
        if inst.stock_lo[t] > inst.stock_hi[t]:
            err(Finding("bounds", f"stock_bounds[{t}]", "L exceeds U"))
    for v, rows in enumerate(inst.vendors):
        for t, b in enumerate(rows):
            path = f"vendors[{v}].periods[{t}]"
            if b.Lx < 0 or b.Ly < 0:
                err(Finding("bounds", path, "trade bounds must be nonnegative"))
            if b.Lx > b.Ux:
                err(Finding("bounds", path, "Lx exceeds Ux"))
            if b.Ly > b.Uy:
                err(Finding("bounds", path, "Ly exceeds Uy"))
            if b.fx < 0 or b.fy < 0:
                err(Finding("bounds", path, "fixed charges must be nonnegative"))

    lat = inst.lattice
    if lat is not None:
        if lat.gamma < 0:
            err(Finding("lattice", "lattice.gamma", "gamma must be nonnegative"))
        for i, d in enumerate(lat.basis):
            if d <= 0:
                err(Finding("lattice", f"lattice.basis[{i}]", "basis entries must be positive"))

    lattice_usable = lat is not None and lat.gamma >= 0 and all(d > 0 for d in lat.basis)

    def representable(value: int) -> bool:
        # with an unusable lattice the structural errors above already fired
        if lat is None or not lattice_usable:
            return True
        return lattice_representable(value, lat.basis, lat.gamma)

    if lattice_usable:
        for v, rows in enumerate(inst.vendors):
            for t, b in enumerate(rows):
                for name, value in (("Lx", b.Lx), ("Ux", b.Ux), ("Ly", b.Ly), ("Uy", b.Uy)):
                    if not representable(value):
                        err(
                            Finding(
                                "lattice",
                                f"vendors[{v}].periods[{t}].{name}",
                                "bound is not a signed basis combination within gamma",
                            )
                        )

    for con in inst.constraints:
        cpath = f"constraints[{con.id}]"
        if len(con.conditions) < 2:
            err(Finding("constraint", cpath, "needs at least two conditions"))
        for j, cond in enumerate(con.conditions):
            dpath = f"{cpath}.conditions[{j}]"
            if not (1 <= cond.var.vendor <= inst.V):
                err(Finding("constraint", f"{dpath}.vendor", f"vendor {cond.var.vendor} out of range"))
            if not (1 <= cond.var.time <= inst.T):
                err(Finding("constraint", f"{dpath}.time", f"time {cond.var.time} out of range"))
            if cond.anchor.tag == "explicit":
                if cond.anchor.value is None:
                    err(Finding("constraint", f"{dpath}.value", "explicit anchor needs a value"))
                elif cond.anchor.value < 0:
                    err(Finding("constraint", f"{dpath}.value", "explicit anchor must be nonnegative"))
                elif not representable(cond.anchor.value):
                    err(
                        Finding(
                            "lattice",
                            f"{dpath}.value",
                            "explicit anchor is not a signed basis combination within gamma",
                        )
                    )

    from . import comp_constraints  # local import, avoids a module cycle

    chat = comp_constraints.thickness(inst.constraints)
    report.stats["thickness"] = chat
    report.stats["scale"] = inst.scale
    if vendor_budget is not None and inst.V > vendor_budget:
        report.warnings.append(
            Finding("budget", "V", f"vendor count {inst.V} exceeds budget {vendor_budget}")
        )
    if thickness_budget is not None and chat > thickness_budget:
        report.warnings.append(
            Finding("budget", "constraints", f"thickness {chat} exceeds budget {thickness_budget}")
        )
    if lat is not None and not report.errors:
        k = len(lat.basis)
        pre_clip_bound = (2 * inst.T + 2) * (2 * inst.V * inst.T * lat.gamma + 1) ** k
        report.stats["lattice_pre_clip_bound"] = pre_clip_bound
        report.stats["node_bound_hint"] = inst.T * pre_clip_bound**2 * 4**chat
    return report


# ---------------------------------------------------------------------------
# Payoff evaluation


def stock_payoff_value(inst: Instance, t: int, s: int) -> Fraction:
    """End-of-period stock payoff: max over affine pieces, 0 when none."""
    pieces = inst.stock_payoff[t - 1]
    if not pieces:
        return Fraction(0)
    sv = inst.to_fraction(s)
    return max(p.slope * sv + p.intercept for p in pieces)


def evaluate_payoff(inst: Instance, t: int, d: Decision, s: int) -> Fraction:
    """Exact payoff of a period: trades plus end-of-period stock value.

    ``s`` is the stock at the end of period ``t`` (scaled).  Reference
    implementation in pure rationals; the solver uses :class:`PayoffTable`,
    which must agree with this everywhere.
    """
    total = Fraction(0)
    for v in range(inst.V):
        b = inst.vendors[v][t - 1]
        total += b.ry * inst.to_fraction(d.y[v]) - b.cx * inst.to_fraction(d.x[v])
        total -= b.fy * d.z[v] + b.fx * d.w[v]
    return total + stock_payoff_value(inst, t, s)


class PayoffTable:
    """Integer-scaled payoff evaluation for the solver's hot loops.

    All per-period payoffs are integer numerators over one fixed positive
    denominator, so ``weight(t, d, s) / denominator`` equals
    :func:`evaluate_payoff` exactly while path sums stay in plain ints.
    """

    def __init__(self, inst: Instance):
        self.inst = inst
        D = inst.scale
        P = D
        for rows in inst.vendors:
            for b in rows:
                P = math.lcm(P, D * b.cx.denominator, D * b.ry.denominator, b.fx.denominator, b.fy.denominator)
        for row in inst.stock_payoff:
            for p in row:
                P = math.lcm(P, D * p.slope.denominator, p.intercept.denominator)
        self.denominator = P

        def whole(q: Fraction) -> int:
            assert q.denominator == 1
            return q.numerator

        # Per (t, v): integer coefficients against scaled trade volumes.
        self._xc = [[whole(-rows[t].cx * P / D) for rows in inst.vendors] for t in range(inst.T)]
        self._yc = [[whole(rows[t].ry * P / D) for rows in inst.vendors] for t in range(inst.T)]
        self._wc = [[whole(-rows[t].fx * P) for rows in inst.vendors] for t in range(inst.T)]
        self._zc = [[whole(-rows[t].fy * P) for rows in inst.vendors] for t in range(inst.T)]
        self._pieces = [
            [(whole(p.slope * P / D), whole(p.intercept * P)) for p in row] for row in inst.stock_payoff
        ]
        self._dec_cache: dict[tuple[int, tuple[int, ...], tuple[int, ...]], int] = {}
        self._stock_cache: dict[tuple[int, int], int] = {}

    def decision_part(self, t: int, d: Decision) -> int:
        key = (t, d.x, d.y)
        got = self._dec_cache.get(key)
        if got is None:
            i = t - 1
            xc, yc, wc, zc = self._xc[i], self._yc[i], self._wc[i], self._zc[i]
            got = sum(
                xc[v] * d.x[v] + yc[v] * d.y[v] + wc[v] * d.w[v] + zc[v] * d.z[v]
                for v in range(self.inst.V)
            )
            self._dec_cache[key] = got
        return got

    def stock_part(self, t: int, s: int) -> int:
        key = (t, s)
        got = self._stock_cache.get(key)
        if got is None:
            pieces = self._pieces[t - 1]
            got = max((a * s + c for a, c in pieces), default=0)
            self._stock_cache[key] = got
        return got

    def weight(self, t: int, d: Decision, s: int) -> int:
        return self.decision_part(t, d) + self.stock_part(t, s)

    def to_objective(self, total: int) -> Fraction:
        return Fraction(total, self.denominator)


def payoff_bounds(inst: Instance) -> tuple[Fraction, Fraction]:
    """Exact lower/upper bounds on the total payoff over any schedule.

    Per period, each trade contributes between its worst and best endpoint
    value (0 is always available), fixed charges subtract at most fx + fy,
    and each stock payoff is bracketed by its piece values at the stock
    window endpoints.  Used for big-M construction.
    """
    lo = Fraction(0)
    hi = Fraction(0)
    for t in range(1, inst.T + 1):
        for v in range(1, inst.V + 1):
            b = inst.bounds(v, t)
            for coef, low, high in ((-b.cx, b.Lx, b.Ux), (b.ry, b.Ly, b.Uy)):
                vals = (Fraction(0), coef * inst.to_fraction(low), coef * inst.to_fraction(high))
                lo += min(vals)
                hi += max(vals)
            lo -= b.fx + b.fy
        pieces = inst.stock_payoff[t - 1]
        if pieces:
            slo, shi = inst.stock_window(t)
            ends = [p.slope * inst.to_fraction(e) + p.intercept for p in pieces for e in (slo, shi)]
            # max of affine pieces over an interval peaks at an endpoint and
            # never drops below the best piece's minimum endpoint value
            hi += max(ends)
            lo += max(min(p.slope * inst.to_fraction(e) + p.intercept for e in (slo, shi)) for p in pieces)
    return lo, hi


# ---------------------------------------------------------------------------
# Solution documents and auditing


def solution_document(inst: Instance, sol: Solution) -> dict[str, Any]:
    tf = inst.to_fraction
    return {
        "objective": format_ratio(sol.objective),
        "stocks": [format_number(tf(s)) for s in sol.stocks],
        "periods": [
            {
                "x": [format_number(tf(q)) for q in d.x],
                "y": [format_number(tf(q)) for q in d.y],
                "w": list(d.w),
                "z": list(d.z),
            }
            for d in sol.decisions
        ],
    }


def dump_solution(inst: Instance, sol: Solution) -> str:
    """Canonical JSON text; identical solutions serialize to identical bytes."""
    return json.dumps(solution_document(inst, sol), indent=2) + "\n"


def load_solution(inst: Instance, document: str | bytes | Mapping[str, Any]) -> Solution:
    """Parse a solution document against an instance.

    Dimensions must match the instance and every quantity must land on the
    instance scale; violations raise :class:`SolutionError`.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SolutionError([Finding("parse", "$", f"invalid JSON: {exc}")]) from None
    else:
        doc = document
    if not isinstance(doc, Mapping):
        raise SolutionError([Finding("parse", "$", "expected a JSON object")])
    findings: list[Finding] = []

    def scaled(value: Any, path: str) -> int:
        try:
            q = parse_rational(value, path) * inst.scale
        except InstanceError as exc:
            raise SolutionError(exc.findings) from None
        if q.denominator != 1:
            raise SolutionError(
                [Finding("scale", path, f"value is not on the instance scale 1/{inst.scale}")]
            )
        return q.numerator

    try:
        objective = parse_rational(doc.get("objective"), "objective")
    except InstanceError as exc:
        raise SolutionError(exc.findings) from None

    raw_stocks = doc.get("stocks")
    if not isinstance(raw_stocks, Sequence) or len(raw_stocks) != inst.T + 1:
        raise SolutionError([Finding("parse", "stocks", f"expected an array of length {inst.T + 1}")])
    stocks = tuple(scaled(s, f"stocks[{i}]") for i, s in enumerate(raw_stocks))

    raw_periods = doc.get("periods")
    if not isinstance(raw_periods, Sequence) or len(raw_periods) != inst.T:
        raise SolutionError([Finding("parse", "periods", f"expected an array of length {inst.T}")])
    decisions = []
    for t, entry in enumerate(raw_periods):
        path = f"periods[{t}]"
        if not isinstance(entry, Mapping):
            raise SolutionError([Finding("parse", path, "expected an object")])
        vecs: dict[str, tuple[int, ...]] = {}
        for key in ("x", "y", "w", "z"):
            raw = entry.get(key)
            if not isinstance(raw, Sequence) or len(raw) != inst.V:
                raise SolutionError([Finding("parse", f"{path}.{key}", f"expected an array of length {inst.V}")])
            if key in ("x", "y"):
                vecs[key] = tuple(scaled(q, f"{path}.{key}[{v}]") for v, q in enumerate(raw))
            else:
                ind = []
                for v, q in enumerate(raw):
                    if q not in (0, 1) or isinstance(q, bool):
                        raise SolutionError([Finding("parse", f"{path}.{key}[{v}]", "indicator must be 0 or 1")])
                    ind.append(q)
                vecs[key] = tuple(ind)
        decisions.append(Decision(x=vecs["x"], y=vecs["y"], w=vecs["w"], z=vecs["z"]))
    if findings:
        raise SolutionError(findings)
    return Solution(stocks=stocks, decisions=tuple(decisions), objective=objective)


@dataclass
class AuditReport:
    violations: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_feasible(inst: Instance, sol: Solution) -> AuditReport:
    """Audit a full schedule against every model requirement.

    Checks the stock trajectory (initial value, balance, bounds, sales cap),
    every trade domain, indicator consistency, every complementarity
    constraint as a whole-schedule product, and the declared objective.
    Independent of the solver's incremental bookkeeping by design.
    """
    report = AuditReport()
    bad = report.violations.append
    if len(sol.stocks) != inst.T + 1 or len(sol.decisions) != inst.T:
        bad(Finding("dimension", "$", "solution dimensions do not match the instance"))
        return report
    for t, d in enumerate(sol.decisions, start=1):
        if len(d.x) != inst.V or len(d.y) != inst.V or len(d.w) != inst.V or len(d.z) != inst.V:
            bad(Finding("dimension", f"periods[{t-1}]", "vector length does not match vendor count"))
            return report

    if sol.stocks[0] != inst.s0:
        bad(Finding("initial_stock", "stocks[0]", "does not equal s0"))
    for t in range(1, inst.T + 1):
        d = sol.decisions[t - 1]
        expected = sol.stocks[t - 1] - sum(d.y) + sum(d.x)
        if sol.stocks[t] != expected:
            bad(Finding("balance", f"stocks[{t}]", "stock balance violated"))
        lo, hi = inst.stock_window(t)
        if not (lo <= sol.stocks[t] <= hi):
            bad(Finding("stock_bounds", f"stocks[{t}]", "stock outside its window"))
        if sum(d.y) > sol.stocks[t - 1]:
            bad(Finding("sales_cap", f"periods[{t-1}]", "sales exceed stock on hand"))
        for v in range(1, inst.V + 1):
            b = inst.bounds(v, t)
            path = f"periods[{t-1}]"
            xv, yv = d.x[v - 1], d.y[v - 1]
            if xv != 0 and not (b.Lx <= xv <= b.Ux):
                bad(Finding("trade_domain", f"{path}.x[{v-1}]", "purchase outside {0} u [Lx, Ux]"))
            if xv < 0:
                bad(Finding("trade_domain", f"{path}.x[{v-1}]", "purchase is negative"))
            if yv != 0 and not (b.Ly <= yv <= b.Uy):
                bad(Finding("trade_domain", f"{path}.y[{v-1}]", "sale outside {0} u [Ly, Uy]"))
            if yv < 0:
                bad(Finding("trade_domain", f"{path}.y[{v-1}]", "sale is negative"))
            if d.w[v - 1] != (1 if xv > 0 else 0):
                bad(Finding("indicator", f"{path}.w[{v-1}]", "w inconsistent with x"))
            if d.z[v - 1] != (1 if yv > 0 else 0):
                bad(Finding("indicator", f"{path}.z[{v-1}]", "z inconsistent with y"))

    for con in inst.constraints:
        holds = any(
            decision_value(sol.decisions[cond.var.time - 1], cond.var)
            == resolve_anchor(inst, cond.var, cond.anchor)
            for cond in con.conditions
        )
        if not holds:
            bad(Finding("constraint", f"constraints[{con.id}]", "no condition holds with equality"))

    total = sum(
        (evaluate_payoff(inst, t, sol.decisions[t - 1], sol.stocks[t]) for t in range(1, inst.T + 1)),
        Fraction(0),
    )
    if total != sol.objective:
        bad(Finding("objective", "objective", f"declared {sol.objective}, recomputed {total}"))
    return report

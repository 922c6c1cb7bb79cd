"""Exact solver for multi-vendor warehouse trading schedules.

Trading decisions live in semi-continuous domains ({0} or an interval),
optional complementarity constraints demand that at least one of several
variable/anchor equalities holds, and the payoff is linear in trades plus a
convex piecewise-linear stock value.  The solver enumerates the finitely
many stock levels and extreme per-period decisions an optimum can use,
builds a layered decision network whose nodes also track outstanding
constraints, and extracts the longest path, all in exact rational
arithmetic.
"""

from .builders import (
    MarketBlock,
    assemble_instance,
    build_batch_pricing,
    build_ramp,
    build_tiered_purchase,
    reduce_time_dependent,
    sale_vendor,
    uniform_vendor,
)
from .comp_constraints import (
    advance,
    compile_tables,
    deadline_set,
    relevant_set,
    satisfied_at,
    thickness,
)
from .lattice import (
    StockCandidateSet,
    exact_stock_set,
    lattice_stock_set,
    safe_beta_range,
)
from .model import (
    AuditReport,
    BoundAnchor,
    CapExceeded,
    ComplementarityConstraint,
    Condition,
    Decision,
    Instance,
    InstanceError,
    LatticeSpec,
    PayoffTable,
    Solution,
    SolutionError,
    StockPayoffPiece,
    ValidationReport,
    VarRef,
    VendorPeriodBounds,
    check_feasible,
    dump_instance,
    dump_solution,
    evaluate_payoff,
    load_instance,
    load_solution,
    validate_instance,
)
from .network import (
    Network,
    SolveOptions,
    SolveResult,
    build_network,
    longest_path,
    solve,
)
from .oracle import (
    brute_force_solve,
    grid_search_solve,
    random_feasible_sample,
)
from .transitions import TransitionCache, enumerate_decisions

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "BoundAnchor",
    "CapExceeded",
    "ComplementarityConstraint",
    "Condition",
    "Decision",
    "Instance",
    "InstanceError",
    "LatticeSpec",
    "MarketBlock",
    "Network",
    "PayoffTable",
    "Solution",
    "SolutionError",
    "SolveOptions",
    "SolveResult",
    "StockCandidateSet",
    "StockPayoffPiece",
    "TransitionCache",
    "ValidationReport",
    "VarRef",
    "VendorPeriodBounds",
    "advance",
    "assemble_instance",
    "brute_force_solve",
    "build_batch_pricing",
    "build_network",
    "build_ramp",
    "build_tiered_purchase",
    "check_feasible",
    "compile_tables",
    "deadline_set",
    "dump_instance",
    "dump_solution",
    "enumerate_decisions",
    "evaluate_payoff",
    "exact_stock_set",
    "grid_search_solve",
    "lattice_stock_set",
    "load_instance",
    "load_solution",
    "longest_path",
    "random_feasible_sample",
    "reduce_time_dependent",
    "relevant_set",
    "safe_beta_range",
    "sale_vendor",
    "satisfied_at",
    "solve",
    "thickness",
    "uniform_vendor",
    "validate_instance",
]

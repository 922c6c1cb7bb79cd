"""
What the solver actually builds
===============================

For an instance with declared bound structure the solver enumerates a
finite set of candidate stock levels, expands per-period extreme
decisions between them, and tracks outstanding either/or constraints in
the node state.  This script makes those intermediate objects visible
and compares the measured network against its a-priori size bounds.
"""

from warepath import (
    build_network,
    compile_tables,
    exact_stock_set,
    lattice_stock_set,
    load_instance,
    longest_path,
    safe_beta_range,
)
from warepath.network import predicted_bounds

doc = {
    "T": 3,
    "V": 2,
    "s0": 1,
    "stock_bounds": [{"L": 0, "U": 4}] * 3,
    "vendors": [
        {"periods": [{"Ux": 2, "cx": 1}, {"Ux": 2, "cx": 2}, {"Uy": 2, "ry": 4}]},
        {"periods": [{"Uy": 1, "ry": 2}, {"Uy": 1, "ry": 3}, {"Ux": 1, "cx": 1}]},
    ],
    "lattice": {"basis": [1], "gamma": 2},
    "constraints": [
        {
            "conditions": [
                {"kind": "purchase", "vendor": 1, "time": 2, "anchor": "zero"},
                {"kind": "sale", "vendor": 2, "time": 2, "anchor": "zero"},
            ]
        }
    ],
}
inst = load_instance(doc)

# candidate stocks, two ways: closed-form from the declared lattice, or
# the exact closure over anchored trade combinations
lat = lattice_stock_set(inst, beta_range=safe_beta_range(inst))
exact = exact_stock_set(inst)
print("lattice candidates per period:", [len(level) for level in lat.per_period])
print("exact candidates per period:  ", [len(level) for level in exact.per_period])

tables = compile_tables(inst)
print("constraint thickness:", tables.thickness)

net = build_network(inst, exact)
node_bound, arc_bound = predicted_bounds(inst, exact.union_size, tables.thickness)
print(f"network: {net.node_count} nodes (bound {node_bound}), "
      f"{net.arc_count} arcs (bound {arc_bound})")

best = longest_path(net)
print("longest path value (scaled):", best.value)

"""
Buy low, sell high
==================

The smallest interesting schedule: one vendor sells us up to 5 units at
price 1 in period 1 and buys up to 5 units back at price 3 in period 2.
The optimum is obvious (carry 5 units across the boundary, profit 10),
which makes it a good first check that the pieces fit together.
"""

from warepath import check_feasible, load_instance, solve

doc = {
    "T": 2,
    "V": 1,
    "s0": 0,
    "stock_bounds": [{"L": 0, "U": 10}, {"L": 0, "U": 10}],
    "vendors": [
        {
            "periods": [
                {"Lx": 0, "Ux": 5, "cx": 1},   # period 1: purchases cost 1 each
                {"Ly": 0, "Uy": 5, "ry": 3},   # period 2: sales pay 3 each
            ]
        }
    ],
}

inst = load_instance(doc)
result = solve(inst)

print("status:", result.status)
print("objective:", result.solution.objective)

# the schedule, unscaled back to plain numbers
for t, d in enumerate(result.solution.decisions, start=1):
    x = [str(inst.to_fraction(q)) for q in d.x]
    y = [str(inst.to_fraction(q)) for q in d.y]
    print(f"period {t}: buy {x} sell {y}")
print("stock trajectory:", [str(inst.to_fraction(s)) for s in result.solution.stocks])

# every solution the solver returns has already been audited, but the
# audit is public and cheap, so paranoia costs one line
assert check_feasible(inst, result.solution).ok

# the network behind the answer
print("network:", result.stats.nodes, "nodes,", result.stats.arcs, "arcs")

"""
Tiered purchase pricing
=======================

A supplier offers the first 5 units at cost 1 and the next 5 at cost 2.
Tier two only opens once tier one is exhausted.  That conditional is not
expressible with plain bounds, but it is exactly an either/or constraint:
either tier one sits at its cap, or tier two is untouched.

build_tiered_purchase emits one vendor per tier plus those chain
constraints; we bolt on a buyer at price 4 in period 2 and check the
numbers by exhaustive search.
"""

from warepath import (
    assemble_instance,
    brute_force_solve,
    build_tiered_purchase,
    exact_stock_set,
    load_instance,
    sale_vendor,
    solve,
)

tiers = build_tiered_purchase([(5, 1), (10, 2)], 2)   # cumulative caps
buyer = sale_vendor(2, price=4, cap=10, periods=[2])
doc = assemble_instance(0, (0, 10), [tiers, buyer])

inst = load_instance(doc)
result = solve(inst)
print("objective:", result.solution.objective)  # 40 revenue - 15 cost

for t, d in enumerate(result.solution.decisions, start=1):
    print(f"period {t}: tier purchases {d.x[:2]}, sale {d.y[2]}")

# tier fill order in the optimum: the second tier is only used on top of
# a full first tier
for d in result.solution.decisions:
    if d.x[1] > 0:
        assert d.x[0] == inst.bounds(1, 1).Ux

# cross-check against an oracle that knows nothing about networks
reference = brute_force_solve(inst, exact_stock_set(inst))
assert reference.objective == result.solution.objective
print("oracle agrees:", reference.objective)

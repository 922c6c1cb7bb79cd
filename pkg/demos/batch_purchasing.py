"""
Batch purchasing with binary-weight vendors
===========================================

Stock arrives in fixed batches, at most 10 per period.  Instead of one
vendor per possible count, four all-or-nothing vendors carry 1, 2, 4, and
8 batches; any count up to 10 is a subset sum.  Subsets that overshoot
(8+4, and 8+2+1 once 8+4 is gone) are ruled out by exclusion constraints,
each demanding that at least one member stays at zero.
"""

from warepath import (
    assemble_instance,
    brute_force_solve,
    build_batch_pricing,
    exact_stock_set,
    load_instance,
)

block = build_batch_pricing(batch_size=1, max_batches=10, cost=0, T=1)

print("vendors (all-or-nothing batch counts):")
for i, row in enumerate(block.vendors, start=1):
    print(f"  vendor {i}: exactly {row[0].Ux} or nothing")

print("exclusion constraints:")
for conditions in block.constraints:
    members = " * ".join(f"x{c.vendor}" for c in conditions)
    print(f"  {members} = 0")

# a unit of final stock is worth 1, so the oracle should buy as much as
# the constraints allow: exactly 10
doc = assemble_instance(0, (0, 15), [block], stock_payoff=[[(1, 0)]])
inst = load_instance(doc)
best = brute_force_solve(inst, exact_stock_set(inst))
print("max purchase:", inst.to_fraction(sum(best.decisions[0].x)))

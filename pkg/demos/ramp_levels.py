"""
Operating levels with ramp restrictions
=======================================

A unit runs at one discrete intake level per period (here 1 or 4 units),
and jumping between the two extremes in consecutive periods is forbidden.
The stock windows are rigged so the unconstrained optimum would alternate
4, 1, 4; with the ramp restriction the best final stock drops from 9 to 8.
"""

from warepath import assemble_instance, build_ramp, load_instance, solve

block = build_ramp(levels=[(1, 0), (4, 0)], forbidden_pairs=[(1, 2)], T=3)
doc = assemble_instance(
    0,
    [(0, 4), (4, 6), (0, 20)],          # period 2 wants a mid-size stock
    [block],
    stock_payoff=[[(0, 0)], [(0, 0)], [(1, 0)]],  # only final stock pays
)

inst = load_instance(doc)
result = solve(inst)
print("objective:", result.solution.objective)

levels = []
for d in result.solution.decisions:
    active = next((j + 1 for j in range(2) if d.x[j] > 0), None)
    levels.append(active)
print("levels run:", levels)    # never 1 then 2 or 2 then 1 back to back

"""
Trust, but verify
=================

The solver and the brute-force oracle share no search code: one walks a
longest path, the other enumerates whole trajectories.  Agreement on a
pile of random instances is the strongest correctness signal this
package has.  This script draws a few dozen small instances and compares
status and objective on each.
"""

import random

from warepath import brute_force_solve, exact_stock_set, load_instance, solve


def random_doc(rng):
    T = rng.randint(1, 3)
    V = rng.randint(1, 2)

    def period():
        if rng.random() < 0.3:
            return {}
        return {
            "Ux": rng.randint(0, 2),
            "Uy": rng.randint(0, 2),
            "cx": rng.randint(0, 3),
            "ry": rng.randint(0, 3),
        }

    doc = {
        "T": T,
        "V": V,
        "s0": rng.randint(0, 2),
        "stock_bounds": [{"L": 0, "U": rng.randint(2, 4)} for _ in range(T)],
        "vendors": [{"periods": [period() for _ in range(T)]} for _ in range(V)],
    }
    if rng.random() < 0.5:
        t = rng.randint(1, T)
        doc["constraints"] = [
            {
                "conditions": [
                    {"kind": "purchase", "vendor": 1, "time": t, "anchor": "zero"},
                    {"kind": "sale", "vendor": V, "time": t, "anchor": "zero"},
                ]
            }
        ]
    return doc


rng = random.Random(7)
agreements = 0
for i in range(40):
    inst = load_instance(random_doc(rng))
    result = solve(inst)
    reference = brute_force_solve(inst, exact_stock_set(inst))
    solver_obj = result.solution.objective if result.solution else None
    oracle_obj = reference.objective if reference else None
    assert solver_obj == oracle_obj, f"disagreement on draw {i}"
    agreements += 1

print(f"{agreements}/40 random instances: solver and oracle agree exactly")

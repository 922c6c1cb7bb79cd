import random

from _corpus import corpus, random_schedule
from warepath.comp_constraints import (
    advance,
    compile_tables,
    deadline_set,
    relevant_set,
    satisfied_at,
    thickness,
)
from warepath.model import Decision, load_instance
from warepath.oracle import schedule_satisfies_constraints


def pair_doc(T, conditions_list, *, bounds=None):
    periods = [dict(bounds or {"Ux": 2, "Uy": 2})] * T
    return load_instance(
        {
            "T": T,
            "V": 2,
            "s0": 2,
            "stock_bounds": [{"L": 0, "U": 8}] * T,
            "vendors": [{"periods": periods}, {"periods": periods}],
            "constraints": [{"conditions": conds} for conds in conditions_list],
        }
    )


def cond(kind, vendor, time, anchor="zero", value=None):
    out = {"kind": kind, "vendor": vendor, "time": time, "anchor": anchor}
    if value is not None:
        out["value"] = value
    return out


def window_constraint(t_min, t_max):
    return [cond("purchase", 1, t_min), cond("sale", 1, t_max)]


# ---------------------------------------------------------------------------
# relevance, deadlines, thickness


def test_relevant_window_one_to_three():
    inst = pair_doc(4, [window_constraint(1, 3)])
    cons = inst.constraints
    assert [t for t in range(5) if relevant_set(cons, t)] == [0, 1, 2]


def test_relevant_classic_pair():
    inst = pair_doc(3, [window_constraint(2, 2)])
    cons = inst.constraints
    assert [t for t in range(4) if relevant_set(cons, t)] == [1]


def test_relevant_empty():
    inst = pair_doc(3, [])
    assert all(relevant_set(inst.constraints, t) == frozenset() for t in range(4))


def test_deadline_sets():
    inst = pair_doc(4, [window_constraint(1, 3), window_constraint(1, 1)])
    cons = inst.constraints
    assert deadline_set(cons, 2) == {0}
    assert deadline_set(cons, 0) == {1}
    assert deadline_set(cons, 1) == frozenset()
    two = pair_doc(3, [window_constraint(1, 2), window_constraint(2, 2)]).constraints
    assert deadline_set(two, 1) == {0, 1}


def test_thickness_values():
    assert thickness(()) == 0
    overlap = pair_doc(4, [window_constraint(1, 2), window_constraint(2, 4)])
    assert thickness(overlap.constraints) == 2
    chain = pair_doc(3, [window_constraint(t, t) for t in range(1, 4)])
    assert thickness(chain.constraints) == 1


# ---------------------------------------------------------------------------
# per-decision satisfaction


def test_satisfied_zero_anchor():
    inst = pair_doc(2, [[cond("purchase", 1, 1), cond("sale", 1, 1)]])
    con = inst.constraints[0]
    assert satisfied_at(inst, con, 1, Decision(x=(0, 2), y=(1, 0)))
    assert not satisfied_at(inst, con, 1, Decision(x=(1, 0), y=(1, 0)))


def test_satisfied_upper_anchor():
    # tier chaining: x1 pinned at its cap opens the next tier
    inst = pair_doc(2, [[cond("purchase", 1, 1, "upper"), cond("purchase", 2, 1)]])
    con = inst.constraints[0]
    assert satisfied_at(inst, con, 1, Decision(x=(2, 1), y=(0, 0)))
    assert not satisfied_at(inst, con, 1, Decision(x=(1, 1), y=(0, 0)))


def test_satisfied_wrong_time_false():
    inst = pair_doc(3, [[cond("purchase", 1, 2), cond("sale", 1, 2)]])
    con = inst.constraints[0]
    assert not satisfied_at(inst, con, 1, Decision(x=(0, 0), y=(0, 0)))
    assert not satisfied_at(inst, con, 3, Decision(x=(0, 0), y=(0, 0)))


def test_satisfied_explicit_anchor():
    inst = pair_doc(1, [[cond("purchase", 1, 1, "explicit", 2), cond("sale", 1, 1)]])
    con = inst.constraints[0]
    assert satisfied_at(inst, con, 1, Decision(x=(2, 0), y=(1, 0)))
    assert not satisfied_at(inst, con, 1, Decision(x=(1, 0), y=(1, 0)))


# ---------------------------------------------------------------------------
# the pending-set transition


def test_advance_no_constraints():
    inst = pair_doc(2, [])
    assert advance(inst, frozenset(), 1, Decision(x=(0, 0), y=(0, 0))) == frozenset()


def test_advance_classic_pair_deadline():
    inst = pair_doc(2, [window_constraint(2, 2)])
    tables = compile_tables(inst)
    assert tables.initial_pending == frozenset()
    # enters pending across the period-1 arc
    pending = advance(inst, tables.initial_pending, 1, Decision(x=(0, 0), y=(0, 0)))
    assert pending == {0}
    # at its deadline: a decision satisfying neither condition kills the path
    assert advance(inst, pending, 2, Decision(x=(1, 0), y=(1, 0))) is None
    assert advance(inst, pending, 2, Decision(x=(0, 0), y=(0, 1))) == frozenset()


def test_advance_ramp_carries_over():
    # x_{1,1} = 0 or x_{2,2} = 0: trading vendor 1 now restricts vendor 2 next period
    inst = pair_doc(2, [[cond("purchase", 1, 1), cond("purchase", 2, 2)]])
    tables = compile_tables(inst)
    assert tables.initial_pending == {0}
    pending = advance(inst, tables.initial_pending, 1, Decision(x=(1, 0), y=(0, 0)))
    assert pending == {0}
    assert advance(inst, pending, 2, Decision(x=(0, 1), y=(0, 0))) is None
    assert advance(inst, pending, 2, Decision(x=(0, 0), y=(0, 0))) == frozenset()
    # satisfying the first condition discharges it immediately
    assert advance(inst, tables.initial_pending, 1, Decision(x=(0, 2), y=(0, 0))) == frozenset()


def test_advance_discharges_initial_pending():
    inst = pair_doc(2, [window_constraint(1, 2)])
    tables = compile_tables(inst)
    assert tables.initial_pending == {0}
    got = advance(inst, tables.initial_pending, 1, Decision(x=(0, 0), y=(0, 0)))
    assert got == frozenset()  # x_{1,1} = 0 already holds


def test_tables_match_pointwise_definitions():
    for inst in corpus(29, 20):
        tables = compile_tables(inst)
        cons = inst.constraints
        for t in range(inst.T + 1):
            assert tables.relevant[t] == relevant_set(cons, t)
            assert tables.deadline[t] == deadline_set(cons, t)
        assert tables.thickness == thickness(cons)
        assert tables.relevant[inst.T] == frozenset()


def test_advance_stays_inside_relevant_and_monotone():
    rng = random.Random(37)
    for inst in corpus(37, 25):
        tables = compile_tables(inst)
        for _ in range(4):
            schedule = random_schedule(rng, inst)
            pending = tables.initial_pending
            gone: set[int] = set()
            for t, d in enumerate(schedule, start=1):
                nxt = advance(inst, pending, t, d)
                if nxt is None:
                    break
                assert nxt <= relevant_set(inst.constraints, t)
                # a discharged constraint never comes back
                assert not (gone & nxt)
                gone |= pending - nxt
                pending = nxt


def test_chain_equivalent_to_global_product_check():
    rng = random.Random(41)
    agreements = 0
    for inst in corpus(41, 20):
        tables = compile_tables(inst)
        for _ in range(3):
            schedule = random_schedule(rng, inst)
            pending = tables.initial_pending
            ok = True
            for t, d in enumerate(schedule, start=1):
                nxt = advance(inst, pending, t, d)
                if nxt is None:
                    ok = False
                    break
                pending = nxt
            assert ok == schedule_satisfies_constraints(inst, schedule)
            if ok:
                assert pending == frozenset()
            agreements += 1
    assert agreements == 60

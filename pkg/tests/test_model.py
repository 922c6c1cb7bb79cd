import json
import random
from fractions import Fraction

import pytest

from _corpus import corpus, random_document, random_schedule
from warepath.model import (
    Decision,
    InstanceError,
    PayoffTable,
    Solution,
    SolutionError,
    check_feasible,
    dump_instance,
    dump_solution,
    evaluate_payoff,
    format_number,
    format_ratio,
    lattice_representable,
    load_instance,
    load_solution,
    parse_rational,
    resolve_anchor,
    stock_payoff_value,
    validate_instance,
)
from warepath.model import BoundAnchor, VarRef
from warepath.network import solve


def minimal_doc(**overrides):
    doc = {
        "T": 1,
        "V": 1,
        "s0": 0,
        "stock_bounds": [{"L": 0, "U": 0}],
        "vendors": [{"periods": [{}]}],
    }
    doc.update(overrides)
    return doc


# ---------------------------------------------------------------------------
# parsing and scaling


def test_load_minimal_defaults():
    inst = load_instance(json.dumps(minimal_doc()))
    assert inst.T == 1 and inst.V == 1 and inst.scale == 1
    b = inst.bounds(1, 1)
    assert (b.Lx, b.Ux, b.Ly, b.Uy) == (0, 0, 0, 0)
    assert b.cx == b.ry == b.fx == b.fy == 0
    assert inst.stock_payoff == ((),)
    assert inst.constraints == ()
    assert inst.lattice is None


def test_load_mixed_denominators_scale_two():
    doc = minimal_doc(
        stock_bounds=[{"L": 0, "U": "3/2"}],
        vendors=[{"periods": [{"Ux": "1/2"}]}],
    )
    inst = load_instance(doc)
    assert inst.scale == 2
    assert inst.bounds(1, 1).Ux == 1
    assert inst.stock_window(1) == (0, 3)


def test_load_rejects_bound_beyond_gamma():
    doc = minimal_doc(
        stock_bounds=[{"L": 0, "U": 5}],
        vendors=[{"periods": [{"Ux": 3}]}],
        lattice={"basis": [1], "gamma": 2},
    )
    with pytest.raises(InstanceError) as exc:
        load_instance(doc)
    assert any("Ux" in f.path for f in exc.value.findings)


def test_inverted_sale_bounds_error_names_position():
    doc = {
        "T": 2,
        "V": 1,
        "s0": 0,
        "stock_bounds": [{"L": 0, "U": 4}, {"L": 0, "U": 4}],
        "vendors": [{"periods": [{}, {"Ly": 3, "Uy": 1}]}],
    }
    with pytest.raises(InstanceError) as exc:
        load_instance(doc)
    findings = exc.value.findings
    assert any("vendors[0].periods[1]" in f.path and "Ly" in f.message for f in findings)


def test_unknown_and_missing_keys_rejected():
    with pytest.raises(InstanceError):
        load_instance({"T": 1, "V": 0, "s0": 0, "stock_bounds": [{"L": 0, "U": 0}], "vendors": [], "extra": 1})
    with pytest.raises(InstanceError):
        load_instance({"T": 1, "V": 0, "s0": 0, "vendors": []})


def test_scale_guardrail():
    doc = minimal_doc(s0="1/10000000000000000000")
    with pytest.raises(InstanceError) as exc:
        load_instance(doc)
    assert any(f.code == "scale" for f in exc.value.findings)


def test_parse_rational_accepts_ints_and_ratio_strings():
    assert parse_rational(7) == 7
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == -2


@pytest.mark.parametrize("bad", [1.5, True, False, "abc", None, [1], "1/0"])
def test_parse_rational_rejects(bad):
    with pytest.raises(InstanceError):
        parse_rational(bad)


def test_format_round_trips():
    for q in (Fraction(0), Fraction(5), Fraction(-3, 2), Fraction(7, 3)):
        assert parse_rational(format_number(q)) == q
        assert parse_rational(format_ratio(q)) == q
    assert format_ratio(Fraction(5)) == "5/1"


# ---------------------------------------------------------------------------
# validation


def test_vendor_and_thickness_budget_warnings():
    doc = {
        "T": 4,
        "V": 8,
        "s0": 0,
        "stock_bounds": [{"L": 0, "U": 2}] * 4,
        "vendors": [{"periods": [{"Ux": 1}] * 4}] * 8,
    }
    inst = load_instance(doc)
    report = validate_instance(inst, vendor_budget=1)
    assert report.ok and any(f.path == "V" for f in report.warnings)


def test_thickness_stat_three_spanning():
    pair = lambda t: [
        {"kind": "purchase", "vendor": 1, "time": t, "anchor": "zero"},
        {"kind": "sale", "vendor": 1, "time": t, "anchor": "zero"},
    ]
    doc = {
        "T": 3,
        "V": 1,
        "s0": 0,
        "stock_bounds": [{"L": 0, "U": 2}] * 3,
        "vendors": [{"periods": [{"Ux": 1, "Uy": 1}] * 3}],
        "constraints": [
            {"conditions": pair(2)},
            {"conditions": pair(1) + pair(2)[:1]},
            {"conditions": pair(2) + pair(3)[:1]},
        ],
    }
    inst = load_instance(doc)
    report = validate_instance(inst, thickness_budget=2)
    assert report.stats["thickness"] == 3
    assert any(f.code == "budget" and "thickness" in f.message for f in report.warnings)


def test_constraint_arity_and_range_errors():
    doc = minimal_doc(
        constraints=[{"conditions": [{"kind": "purchase", "vendor": 2, "time": 9, "anchor": "zero"}]}]
    )
    with pytest.raises(InstanceError) as exc:
        load_instance(doc)
    codes = {f.code for f in exc.value.findings}
    assert "constraint" in codes
    messages = " ".join(f.message for f in exc.value.findings)
    assert "vendor 2 out of range" in messages and "time 9 out of range" in messages


def test_negative_quantities_rejected():
    with pytest.raises(InstanceError):
        load_instance(minimal_doc(s0="-1"))
    with pytest.raises(InstanceError):
        load_instance(minimal_doc(vendors=[{"periods": [{"fx": "-1"}]}]))


# ---------------------------------------------------------------------------
# payoff evaluation


def test_payoff_zero_case():
    inst = load_instance(minimal_doc())
    d = Decision(x=(0,), y=(0,))
    assert evaluate_payoff(inst, 1, d, 0) == 0


def test_payoff_linear_formula():
    doc = minimal_doc(
        stock_bounds=[{"L": 0, "U": 10}],
        vendors=[{"periods": [{"Uy": 5, "ry": 3, "fy": 1}]}],
        s0=5,
    )
    inst = load_instance(doc)
    d = Decision(x=(0,), y=(5,))
    assert evaluate_payoff(inst, 1, d, 0) == 14  # 3*5 - 1


def test_stock_payoff_max_of_pieces():
    doc = minimal_doc(
        s0=2,
        stock_bounds=[{"L": 0, "U": 4}],
        stock_payoff=[{"pieces": [{"slope": 1, "intercept": 0}, {"slope": -1, "intercept": 10}]}],
    )
    inst = load_instance(doc)
    assert stock_payoff_value(inst, 1, 2) == 8  # max(2, 8)
    d = Decision(x=(0,), y=(0,))
    assert evaluate_payoff(inst, 1, d, 2) == 8


def test_payoff_table_matches_reference_and_is_additive():
    rng = random.Random(11)
    for inst in corpus(11, 25):
        table = PayoffTable(inst)
        schedule = random_schedule(rng, inst)
        total = Fraction(0)
        acc = 0
        for t, d in enumerate(schedule, start=1):
            s = rng.randint(*inst.stock_window(t))
            per_period = evaluate_payoff(inst, t, d, s)
            assert Fraction(table.weight(t, d, s), table.denominator) == per_period
            total += per_period
            acc += table.weight(t, d, s)
        assert table.to_objective(acc) == total


def test_indicator_defaults():
    d = Decision(x=(0, 3), y=(2, 0))
    assert d.w == (0, 1) and d.z == (1, 0)


def test_resolve_anchor_tags():
    doc = minimal_doc(vendors=[{"periods": [{"Lx": 1, "Ux": 3}]}], stock_bounds=[{"L": 0, "U": 5}])
    inst = load_instance(doc)
    var = VarRef(kind="purchase", vendor=1, time=1)
    assert resolve_anchor(inst, var, BoundAnchor(tag="zero", value=None)) == 0
    assert resolve_anchor(inst, var, BoundAnchor(tag="lower", value=None)) == 1
    assert resolve_anchor(inst, var, BoundAnchor(tag="upper", value=None)) == 3
    assert resolve_anchor(inst, var, BoundAnchor(tag="explicit", value=2)) == 2


def test_lattice_representable_small_cases():
    assert lattice_representable(3, (1,), 3)
    assert not lattice_representable(3, (1,), 2)
    assert lattice_representable(0, (2, 3), 0)
    # 1 = -2 + 3 within gamma 1; 4 needs 2+2 or 3+... not within gamma 1
    assert lattice_representable(1, (2, 3), 1)
    assert not lattice_representable(4, (2, 3), 1)


# ---------------------------------------------------------------------------
# the audit


def test_audit_all_zero_feasible():
    inst = load_instance(minimal_doc())
    sol = Solution(stocks=(0, 0), decisions=(Decision(x=(0,), y=(0,)),), objective=Fraction(0))
    assert check_feasible(inst, sol).ok


def test_audit_classic_pair_product_violation():
    doc = minimal_doc(
        s0=1,
        stock_bounds=[{"L": 0, "U": 5}],
        vendors=[{"periods": [{"Ux": 3, "Uy": 2}]}],
        constraints=[
            {
                "conditions": [
                    {"kind": "purchase", "vendor": 1, "time": 1, "anchor": "zero"},
                    {"kind": "sale", "vendor": 1, "time": 1, "anchor": "zero"},
                ]
            }
        ],
    )
    inst = load_instance(doc)
    sol = Solution(stocks=(1, 2), decisions=(Decision(x=(2,), y=(1,)),), objective=Fraction(0))
    report = check_feasible(inst, sol)
    assert any(f.code == "constraint" for f in report.violations)


def test_audit_catches_each_violation_kind():
    doc = minimal_doc(
        s0=1,
        stock_bounds=[{"L": 0, "U": 3}],
        vendors=[{"periods": [{"Lx": 2, "Ux": 3, "Uy": 1}]}],
    )
    inst = load_instance(doc)

    def codes(sol):
        return {f.code for f in check_feasible(inst, sol).violations}

    zero = Decision(x=(0,), y=(0,))
    assert "initial_stock" in codes(Solution((0, 0), (zero,), Fraction(0)))
    assert "balance" in codes(Solution((1, 2), (zero,), Fraction(0)))
    # stock 1 + 3 = 4 breaks the [0, 3] window
    assert "stock_bounds" in codes(Solution((1, 4), (Decision(x=(3,), y=(0,)),), Fraction(0)))
    # selling 1 from an empty shelf: rebuild with s0 = 0
    inst0 = load_instance(minimal_doc(s0=0, stock_bounds=[{"L": 0, "U": 3}], vendors=[{"periods": [{"Lx": 2, "Ux": 3, "Uy": 1}]}]))
    report = check_feasible(inst0, Solution((0, 1), (Decision(x=(2,), y=(1,)),), Fraction(0)))
    assert any(f.code == "sales_cap" for f in report.violations)
    # purchase below Lx is off-domain
    assert "trade_domain" in codes(Solution((1, 2), (Decision(x=(1,), y=(0,)),), Fraction(0)))
    # wasteful indicator: w = 1 with x = 0
    assert "indicator" in codes(Solution((1, 1), (Decision(x=(0,), y=(0,), w=(1,), z=(0,)),), Fraction(0)))
    # declared objective off by one
    assert "objective" in codes(Solution((1, 1), (zero,), Fraction(1)))


def test_audit_solver_output_clean():
    for inst in corpus(23, 15):
        result = solve(inst)
        if result.solution is not None:
            assert check_feasible(inst, result.solution).ok


# ---------------------------------------------------------------------------
# serialization round-trips


def test_instance_round_trip_identity():
    rng = random.Random(7)
    for _ in range(20):
        doc = random_document(rng)
        inst = load_instance(doc)
        again = load_instance(dump_instance(inst))
        assert again == inst
        assert dump_instance(again) == dump_instance(inst)


def test_solution_round_trip_identity():
    for inst in corpus(31, 12):
        result = solve(inst)
        if result.solution is None:
            continue
        text = dump_solution(inst, result.solution)
        back = load_solution(inst, text)
        assert back == result.solution
        assert dump_solution(inst, back) == text


def test_load_solution_rejects_bad_documents():
    inst = load_instance(minimal_doc())
    good = {
        "objective": "0/1",
        "stocks": [0, 0],
        "periods": [{"x": [0], "y": [0], "w": [0], "z": [0]}],
    }
    assert load_solution(inst, good).objective == 0
    with pytest.raises(SolutionError):
        load_solution(inst, {**good, "stocks": [0]})
    with pytest.raises(SolutionError):
        load_solution(inst, {**good, "periods": []})
    with pytest.raises(SolutionError):
        bad = {**good, "periods": [{"x": [0], "y": [0], "w": [2], "z": [0]}]}
        load_solution(inst, bad)
    with pytest.raises(SolutionError):
        # quantity off the instance scale
        bad = {**good, "stocks": ["1/3", 0]}
        load_solution(inst, bad)


# ---------------------------------------------------------------------------
# rescale invariance


def _rescaled_document(doc: dict, lam: Fraction) -> dict:
    out = json.loads(json.dumps(doc))
    for vendor in out["vendors"]:
        for row in vendor["periods"]:
            for key in ("cx", "ry", "fx", "fy"):
                if key in row:
                    row[key] = format_number(parse_rational(row[key]) * lam)
    for row in out.get("stock_payoff", []):
        for piece in row["pieces"]:
            piece["slope"] = format_number(parse_rational(piece.get("slope", 0)) * lam)
            piece["intercept"] = format_number(parse_rational(piece.get("intercept", 0)) * lam)
    return out


@pytest.mark.parametrize("lam", [Fraction(2), Fraction(1, 2), Fraction(3, 2)])
def test_rescale_invariance(lam):
    rng = random.Random(42)
    tested = 0
    while tested < 6:
        doc = random_document(rng)
        base = solve(load_instance(doc))
        scaled = solve(load_instance(_rescaled_document(doc, lam)))
        assert (base.status == "optimal") == (scaled.status == "optimal")
        if base.solution is None:
            continue
        assert scaled.solution.objective == lam * base.solution.objective
        assert scaled.solution.decisions == base.solution.decisions
        assert scaled.solution.stocks == base.solution.stocks
        tested += 1

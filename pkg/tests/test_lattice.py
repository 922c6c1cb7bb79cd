import random

import pytest

from _corpus import corpus, random_instance
from warepath.lattice import (
    DEFAULT_PERIOD_CAP,
    exact_stock_set,
    lattice_stock_set,
    safe_beta_range,
)
from warepath.model import CapExceeded, InstanceError, load_instance
from warepath.oracle import brute_force_solve


def doc_v1(T, s0, windows, periods, *, lattice=None, constraints=None):
    doc = {
        "T": T,
        "V": 1,
        "s0": s0,
        "stock_bounds": [{"L": lo, "U": hi} for lo, hi in windows],
        "vendors": [{"periods": periods}],
    }
    if lattice is not None:
        doc["lattice"] = lattice
    if constraints is not None:
        doc["constraints"] = constraints
    return doc


# ---------------------------------------------------------------------------
# lattice construction


def test_pre_clip_bound_is_respected():
    rng = random.Random(5)
    for _ in range(20):
        inst = random_instance(rng, force_TV=(2, 1))
        got = lattice_stock_set(inst)
        gamma = inst.lattice.gamma
        bound = (2 * inst.T + 2) * (2 * inst.V * inst.T * gamma + 1) ** len(inst.lattice.basis)
        assert got.pre_clip_size <= bound
        assert bound <= 6 * (4 * gamma + 1)  # T=2, V=1, k=1


def test_empty_span_gamma_zero():
    inst = load_instance(
        doc_v1(1, 0, [(0, 0)], [{}], lattice={"basis": [1], "gamma": 0})
    )
    got = lattice_stock_set(inst)
    assert got.per_period == ((0,), (0,))
    assert got.pre_clip_size == 1


def test_eight_values_before_clipping():
    inst = load_instance(
        doc_v1(
            1,
            2,
            [(0, 10)],
            [{"Lx": 0, "Ux": 1, "Ly": 0, "Uy": 1}],
            lattice={"basis": [1], "gamma": 1},
        )
    )
    got = lattice_stock_set(inst)
    # K = {0, 2, 10} plus beta in {-1, 0, 1}: eight distinct values
    assert got.pre_clip_size == 8
    assert got.per_period[0] == (2,)
    assert got.per_period[1] == (0, 1, 2, 3, 9, 10)


def test_lattice_requires_declaration():
    inst = load_instance(doc_v1(1, 0, [(0, 2)], [{}]))
    with pytest.raises(InstanceError):
        lattice_stock_set(inst)
    with pytest.raises(InstanceError):
        safe_beta_range(inst)


def test_negative_beta_range_rejected():
    inst = load_instance(doc_v1(1, 0, [(0, 2)], [{}], lattice={"basis": [1], "gamma": 1}))
    with pytest.raises(InstanceError):
        lattice_stock_set(inst, beta_range=-1)


def test_lattice_cap_guard():
    inst = load_instance(
        doc_v1(1, 0, [(0, 2)], [{"Ux": 2}], lattice={"basis": [1], "gamma": 2})
    )
    with pytest.raises(CapExceeded):
        lattice_stock_set(inst, period_cap=3)


# ---------------------------------------------------------------------------
# exact construction


def test_zero_alphabet_keeps_base_values():
    inst = load_instance(doc_v1(2, 3, [(0, 4), (2, 5)], [{}, {}]))
    got = exact_stock_set(inst)
    # K = {0, 3} plus window endpoints {0, 2, 4, 5}
    assert got.per_period[0] == (3,)
    assert got.per_period[1] == (0, 2, 3, 4)
    assert got.per_period[2] == (2, 3, 4, 5)


def test_closure_contains_interior_sum():
    inst = load_instance(
        doc_v1(1, 5, [(0, 5)], [{"Lx": 1, "Ux": 3, "Ly": 0, "Uy": 2}])
    )
    got = exact_stock_set(inst)
    # 4 = 5 - 3 + 2 arises from the closure even though no single bound is 4
    assert 4 in got.per_period[1]


def test_exact_cap_guard():
    periods = [{"Lx": 1, "Ux": 3, "Ly": 0, "Uy": 2}] * 3
    inst = load_instance(doc_v1(3, 5, [(0, 30)] * 3, periods))
    with pytest.raises(CapExceeded):
        exact_stock_set(inst, cap=4)


# ---------------------------------------------------------------------------
# invariants


def test_exact_contained_in_safe_lattice():
    for inst in corpus(13, 30):
        exact = exact_stock_set(inst)
        lat = lattice_stock_set(inst, beta_range=safe_beta_range(inst))
        for t in range(inst.T + 1):
            assert set(exact.per_period[t]) <= set(lat.per_period[t])


def test_candidates_sorted_unique_and_clipped():
    for inst in corpus(17, 30):
        for stocks in (exact_stock_set(inst), lattice_stock_set(inst)):
            assert stocks.per_period[0] == (inst.s0,)
            assert stocks.sizes == tuple(len(level) for level in stocks.per_period)
            for t in range(1, inst.T + 1):
                level = stocks.per_period[t]
                assert list(level) == sorted(set(level))
                lo, hi = inst.stock_window(t)
                assert all(lo <= value <= hi for value in level)
            assert stocks.union_size >= max(stocks.sizes) if stocks.sizes else True


def test_oracle_optimum_stocks_are_candidates():
    seen = 0
    for inst in corpus(19, 25):
        stocks = exact_stock_set(inst)
        try:
            best = brute_force_solve(inst, stocks, cap=200_000)
        except CapExceeded:
            continue
        if best is None:
            continue
        seen += 1
        for t in range(inst.T + 1):
            assert best.stocks[t] in stocks.per_period[t]
    assert seen >= 10

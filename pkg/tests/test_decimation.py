import numpy as np
import pytest

from maxsls.decimation import (DecimationView, _IndexedSet,
                               hard_priority_decimate, unit_prop_decimate)
from maxsls.formula import Clause, Formula, is_feasible
from helpers import horn_chain, random_instance


def test_indexed_set():
    s = _IndexedSet(10)
    assert len(s) == 0
    s.add(3)
    s.add(7)
    s.add(3)
    assert len(s) == 2 and 3 in s and 7 in s and 5 not in s
    s.discard(3)
    s.discard(3)
    assert len(s) == 1 and 3 not in s
    rng = np.random.default_rng(0)
    assert s.choose(rng) == 7
    assert sorted(s.to_list()) == [7]


def test_view_satisfaction_and_units():
    f = Formula(3, [Clause((1, 2), hard=True),
                    Clause((-1, 3), weight=1)])
    view = DecimationView(f)
    assert not view.has_units()
    assert len(view.unsat_hard) == 1
    view.assign(1, True)
    assert view.sat[0]
    assert len(view.unsat_hard) == 0
    # (-1, 3) lost a literal and is now a soft unit forcing 3
    assert 1 in view.soft_units
    assert view.forced_literal(1) == 3
    view.assign(3, True)
    assert view.sat[1]
    assert not view.has_units()
    with pytest.raises(ValueError):
        view.assign(1, False)


def test_view_initial_units_and_contradiction():
    f = Formula(2, [Clause((1,), hard=True),
                    Clause((-1,), hard=True),
                    Clause((2,), weight=1)])
    view = DecimationView(f)
    assert {0, 1} <= set(view.hard_units.to_list())
    assert 2 in view.soft_units
    assert 1 in view.contradicted
    assert view.resolve_with_previous(1, [0, 1, 0]) is True
    assert view.resolve_with_previous(1, [0, 0, 0]) is False


def test_mixed_conflict_prefers_hard_side():
    f = Formula(1, [Clause((1,), hard=True), Clause((-1,), weight=1)])
    view = DecimationView(f)
    assert 1 in view.contradicted
    # previous value says False but the hard unit wants True
    assert view.resolve_with_previous(1, [0, 0]) is True
    g = Formula(1, [Clause((-1,), hard=True), Clause((1,), weight=1)])
    assert DecimationView(g).resolve_with_previous(1, [0, 1]) is False


def test_soft_soft_conflict_uses_previous():
    f = Formula(1, [Clause((1,), weight=1), Clause((-1,), weight=1)])
    view = DecimationView(f)
    assert view.resolve_with_previous(1, [0, 1]) is True
    assert view.resolve_with_previous(1, [0, 0]) is False


def test_dead_hard_clause_leaves_unsat_set():
    f = Formula(2, [Clause((1, 2), hard=True)])
    view = DecimationView(f)
    view.assign(1, False)
    assert 0 in view.unsat_hard  # still satisfiable through 2
    view.assign(2, False)
    assert 0 not in view.unsat_hard  # dead, no literals left


def test_horn_chain_fully_propagates():
    f = horn_chain(12)
    rng = np.random.default_rng(7)
    prev = np.zeros(f.num_vars + 1, dtype=np.uint8)
    a = hard_priority_decimate(f, prev, rng)
    assert list(a[1:]) == [1] * 12
    assert is_feasible(f, a)


def test_hard_branch_satisfies_wide_hard_clauses():
    # no units anywhere: decimation must hit the hard branch first
    f = Formula(4, [Clause((1, 2), hard=True), Clause((3, 4), hard=True),
                    Clause((-1, -3), weight=1), Clause((-2, -4), weight=1)])
    for seed in range(40):
        rng = np.random.default_rng(seed)
        a = hard_priority_decimate(f, np.zeros(5, dtype=np.uint8), rng)
        assert is_feasible(f, a)


def test_hard_priority_uses_previous_on_hard_conflicts():
    f = Formula(1, [Clause((1,), hard=True), Clause((-1,), hard=True)])
    for bit in (0, 1):
        prev = np.array([0, bit], dtype=np.uint8)
        for seed in range(10):
            a = hard_priority_decimate(f, prev, np.random.default_rng(seed))
            assert a[1] == bit


def test_unit_prop_flips_coin_on_conflicts():
    f = Formula(1, [Clause((1,), hard=True), Clause((-1,), hard=True)])
    hits = sum(int(unit_prop_decimate(f, np.random.default_rng(s))[1])
               for s in range(400))
    assert 120 < hits < 280


def test_all_variables_assigned():
    rng = np.random.default_rng(3)
    for _ in range(20):
        f = random_instance(rng, max_vars=12, max_clauses=30, feasible=False)
        a = hard_priority_decimate(f, np.zeros(f.num_vars + 1, np.uint8), rng)
        b = unit_prop_decimate(f, rng)
        assert a.shape == (f.num_vars + 1,) and b.shape == (f.num_vars + 1,)
        assert set(np.unique(a[1:])) <= {0, 1}
        assert set(np.unique(b[1:])) <= {0, 1}


def test_deterministic_given_seed():
    rng1 = np.random.default_rng(11)
    f = random_instance(rng1, max_vars=15, max_clauses=40, feasible=False)
    prev = np.zeros(f.num_vars + 1, dtype=np.uint8)
    a = hard_priority_decimate(f, prev, np.random.default_rng(5))
    b = hard_priority_decimate(f, prev, np.random.default_rng(5))
    assert np.array_equal(a, b)

import math

import numpy as np
import pytest

from maxsls.formula import Clause, Formula
from maxsls.weighting import (ALT1, ALT2, STANDARD, WeightParams, WeightState,
                              initialize_weights, soft_update_fires,
                              soft_weight_profile, update_weights)


def _mixed_wpms():
    # soft weights 2, 4, 6 -> avg 4, ratios 0.5, 1.0, 1.5
    return Formula(4, [Clause((1, 2), hard=True),
                       Clause((-1,), weight=2),
                       Clause((3,), weight=4),
                       Clause((-4, 2), weight=6)])


def _plain_pms():
    return Formula(3, [Clause((1, 2), hard=True),
                       Clause((-3,), hard=True),
                       Clause((-1,), weight=1),
                       Clause((2, 3), weight=1)])


def test_defaults_per_kind():
    p = WeightParams.for_kind("pms")
    assert (p.h_inc, p.delta) == (1.0, 1.00072)
    w = WeightParams.for_kind("wpms")
    assert (w.h_inc, w.delta) == (28.0, 1.001)
    o = WeightParams.for_kind("pms", h_inc=3.0, variant=ALT1)
    assert (o.h_inc, o.delta, o.variant) == (3.0, 1.00072, ALT1)
    with pytest.raises(ValueError):
        WeightParams(variant="bogus")


def test_soft_weight_profile():
    f = _mixed_wpms()
    avg, ratio = soft_weight_profile(f)
    assert avg == 4.0
    assert list(ratio) == [0.0, 0.5, 1.0, 1.5]
    hard_only = Formula(1, [Clause((1,), hard=True)])
    avg, ratio = soft_weight_profile(hard_only)
    assert avg == 0.0 and list(ratio) == [0.0]


def test_init_after_infeasible_round():
    for f in (_plain_pms(), _mixed_wpms()):
        ws = WeightState.for_formula(f)
        ws.prev_round_feasible = False
        initialize_weights(f, ws, WeightParams.for_kind(f.kind))
        assert list(ws.weights[ws.hard_mask]) == [1.0] * f.num_hard
        assert list(ws.weights[ws.soft_mask]) == [0.0] * f.num_soft


def test_init_after_feasible_round_plain():
    f = _plain_pms()
    ws = WeightState.for_formula(f)
    ws.prev_round_feasible = True
    initialize_weights(f, ws, WeightParams.for_kind("pms"))
    assert list(ws.weights[ws.hard_mask]) == [0.0, 0.0]
    assert list(ws.weights[ws.soft_mask]) == [1.0, 1.0]


def test_init_after_feasible_round_weighted():
    f = _mixed_wpms()
    ws = WeightState.for_formula(f)
    ws.prev_round_feasible = True
    initialize_weights(f, ws, WeightParams.for_kind("wpms"))
    assert list(ws.weights) == [1.0, 0.5, 1.0, 1.5]


def test_init_alt2_keeps_hard_at_one():
    f = _plain_pms()
    ws = WeightState.for_formula(f)
    ws.prev_round_feasible = True
    initialize_weights(f, ws, WeightParams.for_kind("pms", variant=ALT2))
    assert list(ws.weights[ws.hard_mask]) == [1.0, 1.0]
    assert list(ws.weights[ws.soft_mask]) == [1.0, 1.0]
    # weighted instances are not affected by alt2
    g = _mixed_wpms()
    wsg = WeightState.for_formula(g)
    wsg.prev_round_feasible = True
    initialize_weights(g, wsg, WeightParams.for_kind("wpms", variant=ALT2))
    assert list(wsg.weights) == [1.0, 0.5, 1.0, 1.5]


def test_hard_update_only_touches_falsified():
    f = _plain_pms()
    ws = WeightState.for_formula(f)
    ws.prev_round_feasible = False
    params = WeightParams.for_kind("pms")
    initialize_weights(f, ws, params)
    update_weights(f, ws, params, feasible=False, cost_now=math.inf,
                   cost_best=math.inf, falsified_hard=[1])
    assert list(ws.weights) == [1.0, 2.0, 0.0, 0.0]
    # feasible local optima leave hard weights alone
    ws.first_feasible_found = True
    update_weights(f, ws, params, feasible=True, cost_now=2, cost_best=1,
                   falsified_hard=[])
    assert list(ws.weights[ws.hard_mask]) == [1.0, 2.0]


def test_soft_trigger_table():
    # plain: stalled rule, weighted: when-feasible rule
    assert not soft_update_fires("pms", STANDARD, False, True, 5, 3)
    assert soft_update_fires("pms", STANDARD, True, True, 5, 3)
    assert soft_update_fires("pms", STANDARD, True, True, 3, 3)
    assert not soft_update_fires("pms", STANDARD, True, True, 2, 3)
    assert soft_update_fires("pms", STANDARD, True, False, math.inf, 3)
    assert not soft_update_fires("pms", STANDARD, False, False, math.inf, 3)
    assert soft_update_fires("wpms", STANDARD, False, True, 9, 3)
    assert not soft_update_fires("wpms", STANDARD, True, False, math.inf, 3)
    # alt1 swaps the two rules
    assert soft_update_fires("pms", ALT1, False, True, 9, 3)
    assert not soft_update_fires("pms", ALT1, True, False, math.inf, 3)
    assert not soft_update_fires("wpms", ALT1, False, True, 5, 3)
    assert soft_update_fires("wpms", ALT1, True, True, 3, 3)
    assert soft_update_fires("wpms", ALT1, True, False, math.inf, 3)
    # alt2 keeps the standard triggers
    assert soft_update_fires("pms", ALT2, True, True, 3, 3) == \
        soft_update_fires("pms", STANDARD, True, True, 3, 3)


def test_soft_update_formula():
    f = _mixed_wpms()
    ws = WeightState.for_formula(f)
    ws.prev_round_feasible = True
    ws.first_feasible_found = True
    params = WeightParams.for_kind("wpms")
    initialize_weights(f, ws, params)
    w0 = ws.weights.copy()
    update_weights(f, ws, params, feasible=True, cost_now=4, cost_best=2)
    d = params.delta
    for ci in (1, 2, 3):
        assert ws.weights[ci] == d * (w0[ci] + ws.ratio[ci])
    assert ws.weights[0] == w0[0]


def test_closed_form_small():
    f = _mixed_wpms()
    ws = WeightState.for_formula(f)
    ws.prev_round_feasible = True
    ws.first_feasible_found = True
    params = WeightParams.for_kind("wpms")
    initialize_weights(f, ws, params)
    w0 = ws.weights.copy()
    n = 50
    for _ in range(n):
        update_weights(f, ws, params, feasible=True, cost_now=4, cost_best=2)
    d = params.delta
    geom = d * (d**n - 1) / (d - 1)
    for ci in (1, 2, 3):
        expect = d**n * w0[ci] + ws.ratio[ci] * geom
        assert ws.weights[ci] == pytest.approx(expect, rel=1e-12)

"""Dynamic clause weighting for the local search.

Each search round starts from fresh dynamic weights chosen by how the
previous round ended, and every local optimum bumps the weights of currently
falsified clauses so the search can move off the plateau.  Soft weight
growth is geometric: w := delta * (w + w_org / avg_soft), so relative
original weights keep mattering while absolute magnitudes inflate slowly.

Hard and soft updates fire under different conditions depending on the
instance kind; the `variant` knob exists to disable or swap individual rules
for ablation experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .formula import PMS, WPMS, Formula

STANDARD = "standard"
ALT1 = "alt1"  # swap the soft-update triggers of the two instance kinds
ALT2 = "alt2"  # init hard weights to 1 even after a feasible plain round

VARIANTS = (STANDARD, ALT1, ALT2)

_KIND_DEFAULTS = {PMS: (1.0, 1.00072), WPMS: (28.0, 1.001)}


@dataclass
class WeightParams:
    """Weighting knobs: hard increment, soft growth factor, rule variant."""

    h_inc: float = 1.0
    delta: float = 1.00072
    variant: str = STANDARD

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")

    @classmethod
    def for_kind(cls, kind: str, h_inc: float | None = None,
                 delta: float | None = None, variant: str = STANDARD) -> "WeightParams":
        """Defaults tuned per instance kind, with optional overrides."""
        base_inc, base_delta = _KIND_DEFAULTS[kind]
        return cls(h_inc if h_inc is not None else base_inc,
                   delta if delta is not None else base_delta,
                   variant)


def soft_weight_profile(formula: Formula):
    """Per-clause w_org / avg_soft ratios (0 for hard) and the average itself."""
    m = formula.num_clauses
    ratio = np.zeros(m, dtype=np.float64)
    soft = [(ci, c.weight) for ci, c in enumerate(formula.clauses) if not c.hard]
    if not soft:
        return 0.0, ratio
    avg_soft = sum(w for _, w in soft) / len(soft)
    for ci, w in soft:
        ratio[ci] = w / avg_soft
    return avg_soft, ratio


@dataclass
class WeightState:
    """Mutable weighting state carried across rounds of one solver run."""

    weights: np.ndarray
    hard_mask: np.ndarray
    soft_mask: np.ndarray
    avg_soft: float
    ratio: np.ndarray
    first_feasible_found: bool = False
    prev_round_feasible: bool = False

    @classmethod
    def for_formula(cls, formula: Formula) -> "WeightState":
        m = formula.num_clauses
        hard_mask = np.array([c.hard for c in formula.clauses], dtype=bool)
        avg_soft, ratio = soft_weight_profile(formula)
        return cls(weights=np.zeros(m, dtype=np.float64),
                   hard_mask=hard_mask,
                   soft_mask=~hard_mask,
                   avg_soft=avg_soft,
                   ratio=ratio)


def initialize_weights(formula: Formula, ws: WeightState, params: WeightParams) -> None:
    """Reset dynamic weights for a new round.

    After an infeasible round the search must focus on hard clauses, so they
    start at 1 and soft at 0.  After a feasible round soft clauses matter:
    plain instances start hard at 0 and soft at 1, weighted instances keep
    hard at 1 and start soft at their normalized original weight.
    """
    w = ws.weights
    if not ws.prev_round_feasible:
        w[ws.hard_mask] = 1.0
        w[ws.soft_mask] = 0.0
    elif formula.kind == PMS:
        w[ws.hard_mask] = 1.0 if params.variant == ALT2 else 0.0
        w[ws.soft_mask] = 1.0
    else:
        w[ws.hard_mask] = 1.0
        w[ws.soft_mask] = ws.ratio[ws.soft_mask]


STALLED = "stalled"
WHEN_FEASIBLE = "when-feasible"


def soft_update_mode(kind: str, variant: str) -> str:
    """Which trigger governs soft updates for this kind under this variant.

    Plain instances use the stalled rule, weighted ones the when-feasible
    rule; the alt1 variant swaps them.
    """
    stalled_rule = kind == PMS
    if variant == ALT1:
        stalled_rule = not stalled_rule
    return STALLED if stalled_rule else WHEN_FEASIBLE


def soft_update_fires(kind: str, variant: str, first_feasible_found: bool,
                      feasible: bool, cost_now, cost_best) -> bool:
    """Decide whether a local optimum triggers the soft-weight update.

    The stalled rule waits until some feasible solution was ever found and
    the current assignment is no better than the best (infeasible counts as
    not better).  The when-feasible rule fires whenever the current
    assignment is feasible.
    """
    if soft_update_mode(kind, variant) == STALLED:
        return first_feasible_found and (not feasible or cost_now >= cost_best)
    return feasible


def update_weights(formula: Formula, ws: WeightState, params: WeightParams,
                   feasible: bool, cost_now, cost_best,
                   falsified_hard=()) -> None:
    """Apply the local-optimum weight bump in place.

    `falsified_hard` lists the clause ids of hard clauses the current
    assignment falsifies; each gains h_inc.  Soft clauses are rescaled as a
    block when their trigger fires.
    """
    w = ws.weights
    if not feasible:
        for ci in falsified_hard:
            w[ci] += params.h_inc
    if soft_update_fires(formula.kind, params.variant, ws.first_feasible_found,
                         feasible, cost_now, cost_best):
        soft = ws.soft_mask
        w[soft] = params.delta * (w[soft] + ws.ratio[soft])

"""Anytime local search driver.

A run is a sequence of rounds.  Each round builds an initial assignment by
decimation, resets the dynamic clause weights, then flips variables until
the round's step limit passes without improvement; the limit is pushed out
every time a new overall best is found, so productive rounds keep going.
Within a round, flips pick the best of k sampled positive-score variables,
or, when no variable has positive score, bump the weights of falsified
clauses and flip the best variable of a random falsified one (hard first).

The flip loop itself is compiled (see _kernels); this module owns packing
the formula into flat arrays, round/restart control, wall-clock or flip
budgets, and the improvement trace used for anytime output.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .decimation import hard_priority_decimate, unit_prop_decimate
from .formula import INFEASIBLE, PMS, WPMS, Formula, random_assignment
from .weighting import (STALLED, WeightParams, WeightState,
                        initialize_weights, soft_update_mode)

#: Per-kind default for the best-of-k variable sampling.
DEFAULT_BMS_K = {PMS: 53, WPMS: 97}

_HUGE = 2**62


class NoFalsifiedClauseError(Exception):
    """pick_from_falsified was called while every clause is satisfied."""


@dataclass
class SearchParams:
    """Run-level knobs for solve().

    `max_flips` switches from the wall-clock cutoff to a deterministic flip
    budget; `target_cost` stops the run as soon as the best gets there.
    """

    bms_k: int | None = None
    max_non_improve_steps: int = 10_000_000
    cutoff_seconds: float = 60.0
    seed: int = 1
    max_flips: int | None = None
    target_cost: int | None = None
    decimation: str = "auto"  # auto | unh | up

    def __post_init__(self):
        if self.decimation not in ("auto", "unh", "up"):
            raise ValueError(f"unknown decimation mode {self.decimation!r}")


@dataclass
class TracePoint:
    """One improvement: when it happened, the new cost, flips done by then."""

    elapsed: float
    cost: int
    flips: int


@dataclass
class RunResult:
    best_assignment: np.ndarray | None
    best_cost: int | float
    time_to_best: float | None
    total_flips: int
    improvement_trace: list[TracePoint] = field(default_factory=list)
    proved_optimal: bool = False
    restarts: int = 0
    flips_per_round: list[int] = field(default_factory=list)
    wall_time: float = 0.0


class _Packed:
    """Formula flattened to the CSR arrays the kernels work on."""

    def __init__(self, formula: Formula):
        n, m = formula.num_vars, formula.num_clauses
        total = sum(len(c.lits) for c in formula.clauses)
        self.lits = np.zeros(total, dtype=np.int32)
        self.cstart = np.zeros(m + 1, dtype=np.int64)
        self.hard = np.zeros(m, dtype=np.uint8)
        self.cost_unit = np.zeros(m, dtype=np.int64)
        soft_ids = []
        pos = 0
        for ci, c in enumerate(formula.clauses):
            self.cstart[ci] = pos
            for lit in c.lits:
                self.lits[pos] = lit
                pos += 1
            if c.hard:
                self.hard[ci] = 1
            else:
                soft_ids.append(ci)
                self.cost_unit[ci] = 1 if formula.kind == PMS else c.weight
        self.cstart[m] = pos
        if sum(int(u) for u in self.cost_unit) >= 2**63:
            raise ValueError("total soft weight exceeds 63-bit range")
        self.soft_idx = np.array(soft_ids, dtype=np.int64)
        # occurrence CSR keyed by literal code 2v / 2v+1
        ncodes = 2 * n + 2
        counts = np.zeros(ncodes + 1, dtype=np.int64)
        for lit in self.lits:
            counts[_code(lit)] += 1
        self.ostart = np.zeros(ncodes + 1, dtype=np.int64)
        np.cumsum(counts[:-1], out=self.ostart[1:])
        cursor = self.ostart.copy()
        self.occ = np.zeros(total, dtype=np.int32)
        for ci in range(m):
            for jj in range(self.cstart[ci], self.cstart[ci + 1]):
                code = _code(self.lits[jj])
                self.occ[cursor[code]] = ci
                cursor[code] += 1


def _code(lit: int) -> int:
    v = abs(int(lit))
    return 2 * v if lit > 0 else 2 * v + 1


def _soft_mode_flag(formula: Formula, params: WeightParams) -> int:
    return 0 if soft_update_mode(formula.kind, params.variant) == STALLED else 1


class SearchState:
    """Per-round mutable search state over one assignment.

    Wraps the kernel arrays and exposes the elementary operations (flip,
    variable picks, weight bump) plus read access to the derived quantities
    so they can be tested against straightforward recomputation.
    """

    def __init__(self, formula: Formula, ws: WeightState, values, seed: int = 0,
                 packed: _Packed | None = None, best_buf=None):
        n, m = formula.num_vars, formula.num_clauses
        self.formula = formula
        self.ws = ws
        self.packed = packed if packed is not None else _Packed(formula)
        self.values = np.array(values, dtype=np.uint8, copy=True)
        if self.values.shape[0] != n + 1:
            raise ValueError("assignment length must be num_vars + 1")
        self.w = ws.weights
        self.sat_count = np.zeros(m, dtype=np.int32)
        self.sat_var = np.zeros(m, dtype=np.int32)
        self.gain = np.zeros(n + 1, dtype=np.float64)
        self.loss = np.zeros(n + 1, dtype=np.float64)
        self.score = np.zeros(n + 1, dtype=np.float64)
        self.last_flip = np.zeros(n + 1, dtype=np.int64)
        self.gv_list = np.zeros(n + 1, dtype=np.int64)
        self.gv_pos = np.full(n + 1, -1, dtype=np.int64)
        self.fh_list = np.zeros(m, dtype=np.int64)
        self.fh_pos = np.full(m, -1, dtype=np.int64)
        self.fs_list = np.zeros(m, dtype=np.int64)
        self.fs_pos = np.full(m, -1, dtype=np.int64)
        self.ctr = np.zeros(K.CTR_SIZE, dtype=np.int64)
        self.ctr[K.LIMIT] = _HUGE
        self.rng = np.array([seed], dtype=np.uint64)
        self.best_buf = best_buf if best_buf is not None else np.zeros(n + 1, dtype=np.uint8)
        self.rb_buf = np.zeros(n + 1, dtype=np.uint8)
        p = self.packed
        K._rebuild(p.lits, p.cstart, p.hard, p.cost_unit, self.w, self.values,
                   self.sat_count, self.sat_var, self.gain, self.loss,
                   self.score, self.last_flip, self.gv_list, self.gv_pos,
                   self.fh_list, self.fh_pos, self.fs_list, self.fs_pos,
                   self.ctr, self.rb_buf)

    def flip(self, v: int) -> None:
        if not 1 <= v <= self.formula.num_vars:
            raise ValueError(f"variable {v} out of range")
        p = self.packed
        K._flip(np.int64(v), p.lits, p.cstart, p.occ, p.ostart, p.hard,
                p.cost_unit, self.w, self.values, self.sat_count, self.sat_var,
                self.gain, self.loss, self.score, self.last_flip,
                self.gv_list, self.gv_pos, self.fh_list, self.fh_pos,
                self.fs_list, self.fs_pos, self.ctr)

    def pick_bms(self, k: int) -> int:
        """Best of k samples from the good variables; they must exist."""
        if self.ctr[K.GV_LEN] == 0:
            raise ValueError("good variable set is empty")
        return int(K._pick_bms(np.int64(k), self.gv_list, self.ctr,
                               self.score, self.last_flip, self.rng))

    def pick_from_falsified(self) -> int:
        p = self.packed
        v = K._pick_from_falsified(p.lits, p.cstart, self.fh_list, self.fs_list,
                                   self.ctr, self.score, self.last_flip, self.rng)
        if v < 0:
            raise NoFalsifiedClauseError("every clause is satisfied")
        return int(v)

    def bump_weights(self, params: WeightParams) -> None:
        """Kernel-side local-optimum weight update on this state."""
        p = self.packed
        K._bump_weights(params.h_inc, params.delta,
                        np.int64(_soft_mode_flag(self.formula, params)),
                        p.lits, p.cstart, p.soft_idx, self.ws.ratio, self.w,
                        self.sat_count, self.sat_var, self.gain, self.loss,
                        self.score, self.gv_list, self.gv_pos, self.fh_list,
                        self.ctr)

    # read access for tests and callers
    @property
    def soft_cost(self) -> int:
        """Falsified-soft total of the current assignment (base included)."""
        return self.formula.soft_base_cost() + int(self.ctr[K.COST])

    @property
    def is_feasible(self) -> bool:
        return self.ctr[K.FH_LEN] == 0 and not self.formula.has_empty_hard

    @property
    def good_vars(self) -> frozenset:
        return frozenset(int(v) for v in self.gv_list[: self.ctr[K.GV_LEN]])

    @property
    def falsified_hard(self) -> frozenset:
        return frozenset(int(c) for c in self.fh_list[: self.ctr[K.FH_LEN]])

    @property
    def falsified_soft(self) -> frozenset:
        return frozenset(int(c) for c in self.fs_list[: self.ctr[K.FS_LEN]])


def init_state(formula: Formula, values, ws: WeightState | None = None,
               seed: int = 0) -> SearchState:
    """Build a SearchState for one assignment (weights default to all-ones
    hard / all-zeros soft, the infeasible-round init)."""
    if ws is None:
        ws = WeightState.for_formula(formula)
        ws.weights[ws.hard_mask] = 1.0
    return SearchState(formula, ws, values, seed=seed)


def solve(formula: Formula, params: SearchParams | None = None,
          weight_params: WeightParams | None = None,
          progress_sink=None) -> RunResult:
    """Run the anytime search and return the best solution found.

    `progress_sink(elapsed, cost, values)` is called on every improvement
    with a copy of the new best assignment.  With `max_flips` set the run is
    deterministic for a given seed; otherwise it stops at `cutoff_seconds`.
    """
    sp = params if params is not None else SearchParams()
    wp = weight_params if weight_params is not None else WeightParams.for_kind(formula.kind)
    bms_k = sp.bms_k if sp.bms_k is not None else DEFAULT_BMS_K[formula.kind]
    t0 = time.perf_counter()
    base = formula.soft_base_cost()
    if formula.has_empty_hard:
        return RunResult(None, INFEASIBLE, None, 0, wall_time=time.perf_counter() - t0)
    rng = np.random.default_rng(sp.seed)
    ws = WeightState.for_formula(formula)
    packed = _Packed(formula)
    n = formula.num_vars
    best_buf = np.zeros(n + 1, dtype=np.uint8)
    soft_mode = np.int64(_soft_mode_flag(formula, wp))
    target_on = np.int64(0 if sp.target_cost is None else 1)
    target_k = np.int64(0 if sp.target_cost is None else sp.target_cost - base)
    budget = sp.max_flips
    deadline = t0 + sp.cutoff_seconds
    prev_best = random_assignment(n, rng)
    first_found, has_best, best_cost_k = 0, 0, 0
    time_to_best = None
    trace: list[TracePoint] = []
    flips_per_round: list[int] = []
    total_flips = 0
    proved = False
    # throughput estimate for sizing wall-clock chunks
    kernel_time, kernel_flips = 1e-9, 0
    stop = False
    while not stop:
        if budget is not None:
            if total_flips >= budget:
                break
        elif time.perf_counter() >= deadline:
            break
        mode = sp.decimation
        if mode == "auto":
            mode = "unh" if formula.kind == PMS else "up"
        if mode == "up":
            a = unit_prop_decimate(formula, rng)
        else:
            a = hard_priority_decimate(formula, prev_best, rng)
        initialize_weights(formula, ws, wp)
        st = SearchState(formula, ws, a, seed=int(rng.integers(2**63)),
                         packed=packed, best_buf=best_buf)
        st.ctr[K.LIMIT] = sp.max_non_improve_steps
        st.ctr[K.FIRST_FOUND] = first_found
        st.ctr[K.HAS_BEST] = has_best
        st.ctr[K.BEST_COST] = best_cost_k
        round_base = total_flips
        p = packed
        while True:
            done = st.ctr[K.FLIPS]
            if budget is not None:
                if round_base + done >= budget:
                    stop = True
                    break
                stop_flips = np.int64(budget - round_base)
            else:
                remaining = deadline - time.perf_counter()
                if remaining <= 0:
                    stop = True
                    break
                rate = kernel_flips / kernel_time if kernel_flips else 1e6
                chunk = max(4096, min(int(rate * min(remaining, 0.02)) + 1, 1 << 22))
                stop_flips = np.int64(done + chunk)
            tk = time.perf_counter()
            status = K._run_inner(
                p.lits, p.cstart, p.occ, p.ostart, p.hard, p.cost_unit,
                ws.ratio, p.soft_idx, st.w, st.values, st.sat_count,
                st.sat_var, st.gain, st.loss, st.score, st.last_flip,
                st.gv_list, st.gv_pos, st.fh_list, st.fh_pos, st.fs_list,
                st.fs_pos, st.ctr, st.rng, best_buf, st.rb_buf,
                np.int64(bms_k), wp.h_inc, wp.delta, soft_mode,
                np.int64(sp.max_non_improve_steps), stop_flips,
                target_on, target_k)
            kernel_time += time.perf_counter() - tk
            kernel_flips += int(st.ctr[K.FLIPS]) - int(done)
            total_flips = round_base + int(st.ctr[K.FLIPS])
            if st.ctr[K.IMPROVED] == 1:
                now = time.perf_counter()
                best_cost_k = int(st.ctr[K.BEST_COST])
                first_found = has_best = 1
                ws.first_feasible_found = True
                time_to_best = now - t0
                trace.append(TracePoint(now - t0, base + best_cost_k,
                                        round_base + int(st.ctr[K.IMP_FLIPS])))
                if progress_sink is not None:
                    progress_sink(now - t0, base + best_cost_k, best_buf.copy())
                st.ctr[K.IMPROVED] = 0
            if status == K.ST_IMPROVED:
                continue
            if status == K.ST_PAUSE:
                continue
            if status == K.ST_TARGET:
                stop = True
            elif status == K.ST_OPTIMUM:
                proved = True
                stop = True
            break
        flips_per_round.append(int(st.ctr[K.FLIPS]))
        prev_best = st.rb_buf.copy()
        ws.prev_round_feasible = st.ctr[K.RB_INFEAS] == 0
    wall = time.perf_counter() - t0
    restarts = max(0, len(flips_per_round) - 1)
    if has_best:
        return RunResult(best_buf.copy(), base + best_cost_k, time_to_best,
                         total_flips, trace, proved, restarts,
                         flips_per_round, wall)
    return RunResult(None, INFEASIBLE, None, total_flips, trace, False,
                     restarts, flips_per_round, wall)

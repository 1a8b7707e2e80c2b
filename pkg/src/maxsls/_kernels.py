"""Compiled inner loops of the local search.

Everything here operates on flat numpy arrays so numba can compile it:
clauses in CSR form (lits/cstart), literal occurrence lists keyed by the
code 2*v for v-positive and 2*v+1 for v-negative (occ/ostart), and three
index-backed sets (good variables, falsified hard, falsified soft) whose
lengths live in the int64 counter array `ctr`.

The search loop cannot read the wall clock under nopython mode, so it runs
in flip-count chunks: the driver passes `stop_flips` and the loop returns
ST_PAUSE when it gets there, letting Python check the clock in between.
"""

import numpy as np
from numba import njit

# ctr slots
GV_LEN = 0       # size of the good-variables set
FH_LEN = 1       # number of falsified hard clauses
FS_LEN = 2       # number of falsified soft clauses
COST = 3         # falsified-soft total of the current assignment
STEP = 4         # non-improving step counter of this round
LIMIT = 5        # round ends when STEP reaches this
FLIPS = 6        # flips done this round
HAS_BEST = 7     # 1 once any feasible assignment was recorded
BEST_COST = 8    # cost of the recorded best (valid when HAS_BEST)
IMPROVED = 9     # set when the best was just updated; cleared by the driver
IMP_FLIPS = 10   # FLIPS value at that improvement
FIRST_FOUND = 11 # 1 once any feasible assignment was ever seen this run
RB_INFEAS = 12   # round-best key: 1 while the round never was feasible
RB_VAL = 13      # round-best key: falsified-hard count or cost
CTR_SIZE = 16

# run_inner statuses
ST_IMPROVED = 1
ST_ROUND_DONE = 2
ST_OPTIMUM = 3
ST_TARGET = 4
ST_PAUSE = 5

_U1 = np.uint64(0x9E3779B97F4A7C15)
_U2 = np.uint64(0xBF58476D1CE4E5B9)
_U3 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


@njit(inline="always")
def _rand_u64(rng):
    rng[0] += _U1
    z = rng[0]
    z = (z ^ (z >> _S30)) * _U2
    z = (z ^ (z >> _S27)) * _U3
    return z ^ (z >> _S31)


@njit(inline="always")
def _rand_below(rng, n):
    return np.int64(_rand_u64(rng) % np.uint64(n))


@njit(inline="always")
def _set_add(lst, pos, length, x):
    pos[x] = length
    lst[length] = x
    return length + 1


@njit(inline="always")
def _set_remove(lst, pos, length, x):
    i = pos[x]
    last = lst[length - 1]
    lst[i] = last
    pos[last] = i
    pos[x] = -1
    return length - 1


@njit(inline="always")
def _refresh_good(u, gv_list, gv_pos, ctr, score):
    if score[u] > 0.0:
        if gv_pos[u] < 0:
            ctr[GV_LEN] = _set_add(gv_list, gv_pos, ctr[GV_LEN], u)
    elif gv_pos[u] >= 0:
        ctr[GV_LEN] = _set_remove(gv_list, gv_pos, ctr[GV_LEN], u)


@njit(inline="always")
def _gain_add(u, dw, gain, score, gv_list, gv_pos, ctr):
    gain[u] += dw
    score[u] += dw
    _refresh_good(u, gv_list, gv_pos, ctr, score)


@njit(inline="always")
def _loss_add(u, dw, loss, score, gv_list, gv_pos, ctr):
    loss[u] += dw
    score[u] -= dw
    _refresh_good(u, gv_list, gv_pos, ctr, score)


@njit(cache=True)
def _rebuild(lits, cstart, hard, cost_unit, w, values,
             sat_count, sat_var, gain, loss, score, last_flip,
             gv_list, gv_pos, fh_list, fh_pos, fs_list, fs_pos, ctr, rb_buf):
    """Recompute all derived state from scratch for the current assignment."""
    n = values.shape[0] - 1
    m = sat_count.shape[0]
    for v in range(n + 1):
        gain[v] = 0.0
        loss[v] = 0.0
        score[v] = 0.0
        last_flip[v] = 0
        gv_pos[v] = -1
    for c in range(m):
        fh_pos[c] = -1
        fs_pos[c] = -1
    ctr[GV_LEN] = 0
    ctr[FH_LEN] = 0
    ctr[FS_LEN] = 0
    ctr[COST] = 0
    for c in range(m):
        sc = 0
        sv = 0
        for jj in range(cstart[c], cstart[c + 1]):
            l = lits[jj]
            u = abs(l)
            if (l > 0) == (values[u] == 1):
                sc += 1
                sv = u
        sat_count[c] = sc
        sat_var[c] = sv if sc == 1 else 0
        if sc == 0:
            if hard[c] == 1:
                ctr[FH_LEN] = _set_add(fh_list, fh_pos, ctr[FH_LEN], c)
            else:
                ctr[FS_LEN] = _set_add(fs_list, fs_pos, ctr[FS_LEN], c)
                ctr[COST] += cost_unit[c]
            for jj in range(cstart[c], cstart[c + 1]):
                gain[abs(lits[jj])] += w[c]
        elif sc == 1:
            loss[sv] += w[c]
    for v in range(1, n + 1):
        s = gain[v] - loss[v]
        score[v] = s
        if s > 0.0:
            ctr[GV_LEN] = _set_add(gv_list, gv_pos, ctr[GV_LEN], v)
    # round-best starts as the initial assignment
    for v in range(n + 1):
        rb_buf[v] = values[v]
    if ctr[FH_LEN] > 0:
        ctr[RB_INFEAS] = 1
        ctr[RB_VAL] = ctr[FH_LEN]
    else:
        ctr[RB_INFEAS] = 0
        ctr[RB_VAL] = ctr[COST]


@njit(cache=True)
def _flip(v, lits, cstart, occ, ostart, hard, cost_unit, w, values,
          sat_count, sat_var, gain, loss, score, last_flip,
          gv_list, gv_pos, fh_list, fh_pos, fs_list, fs_pos, ctr):
    """Flip one variable, updating scores, sets and counters incrementally."""
    val = np.uint8(1) - values[v]
    values[v] = val
    sat_code = 2 * v if val == 1 else 2 * v + 1
    brk_code = sat_code ^ 1
    for ii in range(ostart[sat_code], ostart[sat_code + 1]):
        c = occ[ii]
        sc = sat_count[c] + 1
        sat_count[c] = sc
        if sc == 1:
            wc = w[c]
            if hard[c] == 1:
                ctr[FH_LEN] = _set_remove(fh_list, fh_pos, ctr[FH_LEN], c)
            else:
                ctr[FS_LEN] = _set_remove(fs_list, fs_pos, ctr[FS_LEN], c)
                ctr[COST] -= cost_unit[c]
            for jj in range(cstart[c], cstart[c + 1]):
                _gain_add(abs(lits[jj]), -wc, gain, score, gv_list, gv_pos, ctr)
            _loss_add(v, wc, loss, score, gv_list, gv_pos, ctr)
            sat_var[c] = v
        elif sc == 2:
            _loss_add(sat_var[c], -w[c], loss, score, gv_list, gv_pos, ctr)
    for ii in range(ostart[brk_code], ostart[brk_code + 1]):
        c = occ[ii]
        sc = sat_count[c] - 1
        sat_count[c] = sc
        if sc == 0:
            wc = w[c]
            if hard[c] == 1:
                ctr[FH_LEN] = _set_add(fh_list, fh_pos, ctr[FH_LEN], c)
            else:
                ctr[FS_LEN] = _set_add(fs_list, fs_pos, ctr[FS_LEN], c)
                ctr[COST] += cost_unit[c]
            _loss_add(v, -wc, loss, score, gv_list, gv_pos, ctr)
            for jj in range(cstart[c], cstart[c + 1]):
                _gain_add(abs(lits[jj]), wc, gain, score, gv_list, gv_pos, ctr)
        elif sc == 1:
            for jj in range(cstart[c], cstart[c + 1]):
                l = lits[jj]
                u = abs(l)
                if (l > 0) == (values[u] == 1):
                    sat_var[c] = u
                    _loss_add(u, w[c], loss, score, gv_list, gv_pos, ctr)
                    break
    ctr[FLIPS] += 1
    ctr[STEP] += 1
    last_flip[v] = ctr[FLIPS]


@njit(cache=True)
def _pick_bms(k, gv_list, ctr, score, last_flip, rng):
    """Best of k samples (with replacement) from the good variables; ties go
    to the least recently flipped."""
    size = ctr[GV_LEN]
    best = gv_list[_rand_below(rng, size)]
    for _ in range(k - 1):
        u = gv_list[_rand_below(rng, size)]
        if score[u] > score[best] or (score[u] == score[best]
                                      and last_flip[u] < last_flip[best]):
            best = u
    return best


@njit(cache=True)
def _pick_from_falsified(lits, cstart, fh_list, fs_list, ctr, score, last_flip, rng):
    """Highest-score variable of a random falsified clause, hard ones first.
    Returns -1 when nothing is falsified."""
    if ctr[FH_LEN] > 0:
        c = fh_list[_rand_below(rng, ctr[FH_LEN])]
    elif ctr[FS_LEN] > 0:
        c = fs_list[_rand_below(rng, ctr[FS_LEN])]
    else:
        return np.int64(-1)
    best = np.int64(-1)
    for jj in range(cstart[c], cstart[c + 1]):
        u = np.int64(abs(lits[jj]))
        if best < 0 or score[u] > score[best] or (score[u] == score[best]
                                                  and last_flip[u] < last_flip[best]):
            best = u
    return best


@njit(cache=True)
def _bump_weights(h_inc, delta, soft_mode, lits, cstart, soft_idx, ratio, w,
                  sat_count, sat_var, gain, loss, score, gv_list, gv_pos,
                  fh_list, ctr):
    """Local-optimum weight update, mirroring weighting.update_weights.

    soft_mode 0: fire when a feasible best exists and the current assignment
    is no better than it.  soft_mode 1: fire when currently feasible.
    """
    infeasible = ctr[FH_LEN] > 0
    if infeasible:
        for i in range(ctr[FH_LEN]):
            c = fh_list[i]
            w[c] += h_inc
            for jj in range(cstart[c], cstart[c + 1]):
                _gain_add(abs(lits[jj]), h_inc, gain, score, gv_list, gv_pos, ctr)
    if soft_mode == 0:
        fires = ctr[FIRST_FOUND] == 1 and (infeasible or ctr[COST] >= ctr[BEST_COST])
    else:
        fires = not infeasible
    if fires:
        for i in range(soft_idx.shape[0]):
            c = soft_idx[i]
            nw = delta * (w[c] + ratio[c])
            dw = nw - w[c]
            w[c] = nw
            sc = sat_count[c]
            if sc == 0:
                for jj in range(cstart[c], cstart[c + 1]):
                    _gain_add(abs(lits[jj]), dw, gain, score, gv_list, gv_pos, ctr)
            elif sc == 1:
                _loss_add(sat_var[c], dw, loss, score, gv_list, gv_pos, ctr)


@njit(inline="always")
def _note_improvement(values, best_buf, ctr, max_non_improve):
    if ctr[FH_LEN] == 0 and (ctr[HAS_BEST] == 0 or ctr[COST] < ctr[BEST_COST]):
        ctr[BEST_COST] = ctr[COST]
        ctr[HAS_BEST] = 1
        ctr[FIRST_FOUND] = 1
        for i in range(values.shape[0]):
            best_buf[i] = values[i]
        ctr[LIMIT] = ctr[STEP] + max_non_improve
        ctr[IMPROVED] = 1
        ctr[IMP_FLIPS] = ctr[FLIPS]


@njit(cache=True)
def _run_inner(lits, cstart, occ, ostart, hard, cost_unit, ratio, soft_idx,
               w, values, sat_count, sat_var, gain, loss, score, last_flip,
               gv_list, gv_pos, fh_list, fh_pos, fs_list, fs_pos, ctr, rng,
               best_buf, rb_buf, bms_k, h_inc, delta, soft_mode,
               max_non_improve, stop_flips, target_on, target_cost):
    """One chunk of the round's flip loop; see module docstring for statuses."""
    _note_improvement(values, best_buf, ctr, max_non_improve)
    if ctr[IMPROVED] == 1:
        if target_on == 1 and ctr[BEST_COST] <= target_cost:
            return ST_TARGET
        return ST_IMPROVED
    while ctr[STEP] < ctr[LIMIT]:
        if ctr[FLIPS] >= stop_flips:
            return ST_PAUSE
        if ctr[GV_LEN] > 0:
            v = _pick_bms(bms_k, gv_list, ctr, score, last_flip, rng)
        else:
            if ctr[FH_LEN] == 0 and ctr[FS_LEN] == 0:
                return ST_OPTIMUM
            _bump_weights(h_inc, delta, soft_mode, lits, cstart, soft_idx,
                          ratio, w, sat_count, sat_var, gain, loss, score,
                          gv_list, gv_pos, fh_list, ctr)
            v = _pick_from_falsified(lits, cstart, fh_list, fs_list, ctr,
                                     score, last_flip, rng)
        _flip(v, lits, cstart, occ, ostart, hard, cost_unit, w, values,
              sat_count, sat_var, gain, loss, score, last_flip,
              gv_list, gv_pos, fh_list, fh_pos, fs_list, fs_pos, ctr)
        # track the best assignment this round ever reached, preferring
        # feasibility, then fewer falsified hard / lower cost
        if ctr[FH_LEN] > 0:
            ka, kb = 1, ctr[FH_LEN]
        else:
            ka, kb = 0, ctr[COST]
        if ka < ctr[RB_INFEAS] or (ka == ctr[RB_INFEAS] and kb < ctr[RB_VAL]):
            ctr[RB_INFEAS] = ka
            ctr[RB_VAL] = kb
            for i in range(values.shape[0]):
                rb_buf[i] = values[i]
        _note_improvement(values, best_buf, ctr, max_non_improve)
        if ctr[IMPROVED] == 1:
            if target_on == 1 and ctr[BEST_COST] <= target_cost:
                return ST_TARGET
            return ST_IMPROVED
    return ST_ROUND_DONE

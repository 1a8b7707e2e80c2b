"""Shared generators and straightforward reference implementations.

Everything here recomputes from definitions with plain Python loops, on
purpose: tests compare the package's incremental/vectorized code against
these slow but obviously-correct versions.
"""

import itertools
import math

import numpy as np

from maxsls.formula import Clause, Formula


def naive_cost(formula, values):
    """Cost from first principles, not using formula.cost()."""
    if formula.has_empty_hard:
        return math.inf
    total = formula.empty_soft_count if formula.kind == "pms" else formula.empty_soft_weight
    for c in formula.clauses:
        sat = False
        for lit in c.lits:
            v = abs(lit)
            if (lit > 0) == bool(values[v]):
                sat = True
                break
        if not sat:
            if c.hard:
                return math.inf
            total += 1 if formula.kind == "pms" else c.weight
    return total


def enum_optimum(formula):
    """Pure-Python exhaustive optimum; keep the var count small."""
    best = math.inf
    for bits in itertools.product((0, 1), repeat=formula.num_vars):
        c = naive_cost(formula, (0,) + bits)
        if c < best:
            best = c
    return best


def scratch_state(formula, weights, values):
    """gain/loss/score, good vars and falsified sets from definitions."""
    n = formula.num_vars
    gain = {v: 0.0 for v in range(1, n + 1)}
    loss = {v: 0.0 for v in range(1, n + 1)}
    fh, fs = set(), set()
    soft_total = 0
    for ci, c in enumerate(formula.clauses):
        true_vars = [abs(l) for l in c.lits if (l > 0) == bool(values[abs(l)])]
        if not true_vars:
            if c.hard:
                fh.add(ci)
            else:
                fs.add(ci)
                soft_total += 1 if formula.kind == "pms" else c.weight
            for l in c.lits:
                gain[abs(l)] += weights[ci]
        elif len(true_vars) == 1:
            loss[true_vars[0]] += weights[ci]
    score = {v: gain[v] - loss[v] for v in gain}
    good = {v for v in gain if score[v] > 0.0}
    return {"gain": gain, "loss": loss, "score": score, "good_vars": good,
            "falsified_hard": fh, "falsified_soft": fs, "soft_total": soft_total}


def random_instance(rng, max_vars=18, max_clauses=60, hard_frac=0.4,
                    weighted=False, feasible=True, min_vars=3,
                    max_clause_len=3, force_kind=None):
    """Random small instance; with `feasible`, hard clauses are seeded with a
    hidden satisfying assignment so a feasible solution always exists."""
    n = int(rng.integers(min_vars, max_vars + 1))
    m = int(rng.integers(5, max_clauses + 1))
    hidden = rng.integers(0, 2, n + 1)
    clauses = []
    for _ in range(m):
        k = int(rng.integers(1, max_clause_len + 1))
        vs = rng.choice(np.arange(1, n + 1), size=min(k, n), replace=False)
        lits = [int(v) if rng.integers(2) else -int(v) for v in vs]
        hard = bool(rng.random() < hard_frac)
        if hard and feasible:
            j = int(rng.integers(len(lits)))
            v = abs(lits[j])
            lits[j] = v if hidden[v] else -v
        w = int(rng.integers(1, 101)) if weighted else 1
        clauses.append(Clause(tuple(lits), hard, 0 if hard else w))
    return Formula(n, clauses, kind=force_kind)


def dyadic_weights(rng, count, scale=1 << 10, span=1 << 20):
    """Random positive multiples of 2**-10: sums of these are exact in
    float64, so differently-ordered summations agree bit for bit."""
    return rng.integers(1, span, size=count).astype(np.float64) / scale


def horn_chain(n, soft_tail=True):
    """Hard implication chain x1, x1->x2, ..., plus optional soft clauses.

    The unique hard-satisfying pattern sets every variable true, so any
    decimation that honors units must reach it.
    """
    clauses = [Clause((1,), hard=True)]
    for v in range(1, n):
        clauses.append(Clause((-v, v + 1), hard=True))
    if soft_tail:
        for v in range(1, n + 1):
            clauses.append(Clause((-v,), hard=False, weight=1))
    return Formula(n, clauses)

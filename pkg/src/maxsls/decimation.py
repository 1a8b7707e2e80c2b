"""Initial assignment construction by clause-guided decimation.

Variables are assigned one at a time while clause states are tracked under
the growing partial assignment.  Unit clauses force values; when units
disagree on a variable the conflict is resolved before any more propagation.
The hard-priority scheme additionally steers toward satisfying hard clauses
that are running out of unassigned literals, and resolves conflicts using
the best assignment of the previous search round.  The plain scheme flips a
coin on conflicts and otherwise assigns randomly.
"""

from __future__ import annotations

import numpy as np

from .formula import Formula


class _IndexedSet:
    """Array-backed set of ints in [0, capacity) with O(1) random choice."""

    __slots__ = ("_items", "_pos", "_n")

    def __init__(self, capacity: int):
        self._items = np.empty(capacity, dtype=np.int64)
        self._pos = np.full(capacity, -1, dtype=np.int64)
        self._n = 0

    def __len__(self):
        return self._n

    def __contains__(self, x):
        return self._pos[x] >= 0

    def add(self, x: int) -> None:
        if self._pos[x] < 0:
            self._pos[x] = self._n
            self._items[self._n] = x
            self._n += 1

    def discard(self, x: int) -> None:
        i = self._pos[x]
        if i < 0:
            return
        last = self._items[self._n - 1]
        self._items[i] = last
        self._pos[last] = i
        self._pos[x] = -1
        self._n -= 1

    def choose(self, rng: np.random.Generator) -> int:
        return int(self._items[rng.integers(self._n)])

    def to_list(self) -> list[int]:
        return [int(x) for x in self._items[: self._n]]


class DecimationView:
    """Clause bookkeeping under a growing partial assignment.

    Tracks, incrementally under `assign`: per-clause satisfied flags and
    unassigned-literal counts, unit clauses split by hardness, per-variable
    forced-polarity counts, variables forced both ways (`contradicted`), and
    hard clauses that are unsatisfied but still satisfiable (`unsat_hard`).
    """

    def __init__(self, formula: Formula):
        self.formula = formula
        n, m = formula.num_vars, formula.num_clauses
        self.values = np.full(n + 1, -1, dtype=np.int8)  # -1 unassigned
        self.sat = np.zeros(m, dtype=bool)
        self.unassigned_counts = np.zeros(m, dtype=np.int64)
        self.hard_units = _IndexedSet(m)
        self.soft_units = _IndexedSet(m)
        self.unsat_hard = _IndexedSet(m)
        self.hard_pos = np.zeros(n + 1, dtype=np.int64)
        self.hard_neg = np.zeros(n + 1, dtype=np.int64)
        self.soft_pos = np.zeros(n + 1, dtype=np.int64)
        self.soft_neg = np.zeros(n + 1, dtype=np.int64)
        self.contradicted = _IndexedSet(n + 1)
        self.unassigned_vars = _IndexedSet(n + 1)
        for v in range(1, n + 1):
            self.unassigned_vars.add(v)
        for ci, c in enumerate(formula.clauses):
            self.unassigned_counts[ci] = len(c.lits)
            if c.hard:
                self.unsat_hard.add(ci)
            if len(c.lits) == 1:
                self._enter_unit(ci, c.lits[0])

    def _enter_unit(self, ci: int, lit: int) -> None:
        c = self.formula.clauses[ci]
        (self.hard_units if c.hard else self.soft_units).add(ci)
        v = abs(lit)
        if c.hard:
            counts = self.hard_pos if lit > 0 else self.hard_neg
        else:
            counts = self.soft_pos if lit > 0 else self.soft_neg
        counts[v] += 1
        self._refresh_contradicted(v)

    def _leave_unit(self, ci: int, lit: int) -> None:
        c = self.formula.clauses[ci]
        (self.hard_units if c.hard else self.soft_units).discard(ci)
        v = abs(lit)
        if c.hard:
            counts = self.hard_pos if lit > 0 else self.hard_neg
        else:
            counts = self.soft_pos if lit > 0 else self.soft_neg
        counts[v] -= 1
        self._refresh_contradicted(v)

    def _refresh_contradicted(self, v: int) -> None:
        if self.values[v] >= 0:
            self.contradicted.discard(v)
            return
        pos = self.hard_pos[v] + self.soft_pos[v]
        neg = self.hard_neg[v] + self.soft_neg[v]
        if pos > 0 and neg > 0:
            self.contradicted.add(v)
        else:
            self.contradicted.discard(v)

    def forced_literal(self, ci: int) -> int:
        """The single unassigned literal of a unit clause."""
        for lit in self.formula.clauses[ci].lits:
            if self.values[abs(lit)] < 0:
                return lit
        raise ValueError(f"clause {ci} has no unassigned literal")

    def assign(self, var: int, value: bool) -> None:
        """Extend the partial assignment and update all clause states."""
        if self.values[var] >= 0:
            raise ValueError(f"variable {var} is already assigned")
        self.values[var] = 1 if value else 0
        self.unassigned_vars.discard(var)
        sat_lit = var if value else -var
        for ci in self.formula.occurrences(sat_lit):
            was_unit = not self.sat[ci] and self.unassigned_counts[ci] == 1
            self.unassigned_counts[ci] -= 1
            if self.sat[ci]:
                continue
            if was_unit:
                self._leave_unit(ci, sat_lit)
            self.sat[ci] = True
            if self.formula.clauses[ci].hard:
                self.unsat_hard.discard(ci)
        for ci in self.formula.occurrences(-sat_lit):
            self.unassigned_counts[ci] -= 1
            if self.sat[ci]:
                continue
            left = self.unassigned_counts[ci]
            if left == 0:
                # was unit on this variable, now falsified for good
                self._leave_unit(ci, -sat_lit)
                if self.formula.clauses[ci].hard:
                    self.unsat_hard.discard(ci)
            elif left == 1:
                self._enter_unit(ci, self.forced_literal(ci))
        self.contradicted.discard(var)

    def has_units(self) -> bool:
        return len(self.hard_units) > 0 or len(self.soft_units) > 0

    def resolve_with_previous(self, var: int, prev_values) -> bool:
        """Conflict rule: hard-hard and soft-soft fall back to the previous
        round's value, a mixed conflict satisfies the hard side."""
        hp, hn = self.hard_pos[var], self.hard_neg[var]
        if hp > 0 and hn > 0:
            return bool(prev_values[var])
        if hp > 0:
            return True
        if hn > 0:
            return False
        return bool(prev_values[var])

    def final_assignment(self) -> np.ndarray:
        return (self.values == 1).astype(np.uint8)


def _run(formula: Formula, rng: np.random.Generator, prev_values,
         hard_first: bool) -> np.ndarray:
    view = DecimationView(formula)
    while len(view.unassigned_vars) > 0:
        if view.has_units():
            if len(view.contradicted) > 0:
                v = view.contradicted.choose(rng)
                if hard_first:
                    value = view.resolve_with_previous(v, prev_values)
                else:
                    value = bool(rng.integers(2))
                view.assign(v, value)
            else:
                units = view.hard_units if len(view.hard_units) > 0 else view.soft_units
                lit = view.forced_literal(units.choose(rng))
                view.assign(abs(lit), lit > 0)
        elif hard_first and len(view.unsat_hard) > 0:
            ci = view.unsat_hard.choose(rng)
            open_lits = [l for l in formula.clauses[ci].lits if view.values[abs(l)] < 0]
            lit = open_lits[rng.integers(len(open_lits))]
            view.assign(abs(lit), lit > 0)
        else:
            v = view.unassigned_vars.choose(rng)
            view.assign(v, bool(rng.integers(2)))
    return view.final_assignment()


def hard_priority_decimate(formula: Formula, prev_values,
                           rng: np.random.Generator) -> np.ndarray:
    """Decimation that favors hard clauses.

    Unit conflicts are settled by `resolve_with_previous`; absent units, a
    still-satisfiable unsatisfied hard clause gets a random literal of it
    satisfied before any free variable is assigned at random.
    """
    return _run(formula, rng, prev_values, hard_first=True)


def unit_prop_decimate(formula: Formula, rng: np.random.Generator) -> np.ndarray:
    """Plain unit-propagation decimation: conflicts and free variables are
    both settled by coin flip."""
    return _run(formula, rng, None, hard_first=False)

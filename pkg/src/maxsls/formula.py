"""Core model for partial MaxSAT instances.

A formula is a set of hard clauses (must hold) and soft clauses (violating
one costs its weight).  Literals use the DIMACS convention: a nonzero signed
integer, where 3 means variable 3 is true and -3 means it is false.

Assignments are numpy uint8 arrays of length num_vars + 1; index 0 is unused
so that values[v] is the value of variable v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# instance kinds
PMS = "pms"
WPMS = "wpms"

#: Cost reported for assignments that falsify at least one hard clause.
INFEASIBLE = math.inf


@dataclass(frozen=True)
class Clause:
    """A single clause: signed literals plus hard flag and original weight.

    Hard clauses carry weight 0 by convention.  Soft clauses need a positive
    integer weight.
    """

    lits: tuple[int, ...]
    hard: bool = False
    weight: int = 0

    def __post_init__(self):
        if self.hard:
            if self.weight != 0:
                object.__setattr__(self, "weight", 0)
        elif self.weight < 1:
            raise ValueError(f"soft clause weight must be >= 1, got {self.weight}")
        for lit in self.lits:
            if lit == 0:
                raise ValueError("literal 0 is not allowed inside a clause")


def _normalize_lits(lits: tuple[int, ...]) -> tuple[int, ...] | None:
    """Drop duplicate literals; return None when the clause is a tautology."""
    seen: set[int] = set()
    out = []
    for lit in lits:
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


class Formula:
    """Immutable (weighted) partial MaxSAT instance.

    Construction normalizes every clause: duplicate literals are removed and
    tautologies are dropped.  Empty hard clauses make the instance trivially
    infeasible (`has_empty_hard`); empty soft clauses are folded into a
    constant base cost (`empty_soft_count` / `empty_soft_weight`).

    The instance kind is detected from the original soft weights unless
    forced: all-equal weights (or no soft clauses) mean plain partial MaxSAT,
    where cost counts falsified soft clauses instead of summing weights.
    """

    def __init__(self, num_vars: int, clauses, kind: str | None = None):
        if num_vars < 0:
            raise ValueError("num_vars must be >= 0")
        self.num_vars = int(num_vars)
        self.has_empty_hard = False
        self.empty_soft_count = 0
        self.empty_soft_weight = 0
        kept: list[Clause] = []
        soft_weights: set[int] = set()
        for c in clauses:
            if not c.hard:
                soft_weights.add(c.weight)
            lits = _normalize_lits(c.lits)
            if lits is None:
                continue
            if not lits:
                if c.hard:
                    self.has_empty_hard = True
                else:
                    self.empty_soft_count += 1
                    self.empty_soft_weight += c.weight
                continue
            for lit in lits:
                if abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range for {self.num_vars} variables")
            kept.append(c if lits == c.lits else Clause(lits, c.hard, c.weight))
        self.clauses: tuple[Clause, ...] = tuple(kept)
        if kind is None:
            kind = PMS if len(soft_weights) <= 1 else WPMS
        elif kind not in (PMS, WPMS):
            raise ValueError(f"unknown kind {kind!r}")
        self.kind = kind
        # literal occurrence index: clause ids containing v / containing -v
        self.pos_occ: list[list[int]] = [[] for _ in range(self.num_vars + 1)]
        self.neg_occ: list[list[int]] = [[] for _ in range(self.num_vars + 1)]
        for ci, c in enumerate(self.clauses):
            for lit in c.lits:
                if lit > 0:
                    self.pos_occ[lit].append(ci)
                else:
                    self.neg_occ[-lit].append(ci)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def num_hard(self) -> int:
        return sum(1 for c in self.clauses if c.hard)

    @property
    def num_soft(self) -> int:
        return sum(1 for c in self.clauses if not c.hard)

    def occurrences(self, lit: int) -> list[int]:
        """Clause ids whose literal list contains `lit`."""
        return self.pos_occ[lit] if lit > 0 else self.neg_occ[-lit]

    def soft_base_cost(self) -> int:
        """Constant cost contributed by empty soft clauses."""
        if self.kind == PMS:
            return self.empty_soft_count
        return self.empty_soft_weight

    def __repr__(self):
        return (f"Formula(kind={self.kind!r}, num_vars={self.num_vars}, "
                f"hard={self.num_hard}, soft={self.num_soft})")


def lit_satisfied(lit: int, values) -> bool:
    """True when the assignment makes this literal true."""
    return bool(values[abs(lit)]) == (lit > 0)


def clause_satisfied(clause: Clause, values) -> bool:
    return any(lit_satisfied(lit, values) for lit in clause.lits)


def is_feasible(formula: Formula, values) -> bool:
    """True when every hard clause is satisfied."""
    if formula.has_empty_hard:
        return False
    return all(clause_satisfied(c, values) for c in formula.clauses if c.hard)


def cost(formula: Formula, values):
    """Cost of an assignment: INFEASIBLE, or the falsified-soft total.

    For plain partial MaxSAT the total is a count, for the weighted kind it
    is a weight sum.  Empty soft clauses contribute their constant base.
    """
    if not is_feasible(formula, values):
        return INFEASIBLE
    total = formula.soft_base_cost()
    for c in formula.clauses:
        if not c.hard and not clause_satisfied(c, values):
            total += 1 if formula.kind == PMS else c.weight
    return total


def better_than(cost_a, cost_b) -> bool:
    """Strict 'is cost_a an improvement over cost_b' (INFEASIBLE never is)."""
    return cost_a < cost_b


def random_assignment(num_vars: int, rng: np.random.Generator) -> np.ndarray:
    values = np.zeros(num_vars + 1, dtype=np.uint8)
    if num_vars:
        values[1:] = rng.integers(0, 2, size=num_vars, dtype=np.uint8)
    return values


def assignment_from_bits(bits: str) -> np.ndarray:
    """Parse a 0/1 string where character i-1 is the value of variable i."""
    values = np.zeros(len(bits) + 1, dtype=np.uint8)
    for i, ch in enumerate(bits):
        if ch not in "01":
            raise ValueError(f"bad character {ch!r} in assignment string")
        values[i + 1] = ch == "1"
    return values


def bits_from_assignment(values) -> str:
    return "".join("1" if values[v] else "0" for v in range(1, len(values)))

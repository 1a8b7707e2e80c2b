"""Reading and writing WCNF files in the two common dialects.

The classic dialect starts with `p wcnf <vars> <clauses> <top>` and marks a
clause hard by giving it weight >= top.  The newer header-less dialect marks
hard clauses with an `h` prefix and soft clauses with a leading positive
weight; variable count is the largest index used.

Detection rule: a file is classic iff a `p wcnf` line appears before any
clause line.
"""

from __future__ import annotations

import os

from .formula import Clause, Formula

CLASSIC = "classic"
NEW = "new"

_MAX_WEIGHT = 2**63 - 1


class WcnfError(Exception):
    """Malformed WCNF input; `line` is the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MalformedHeaderError(WcnfError):
    pass


class LiteralOutOfRangeError(WcnfError):
    pass


class MissingTerminatingZeroError(WcnfError):
    pass


class NonPositiveSoftWeightError(WcnfError):
    pass


class WeightOverflowError(WcnfError):
    pass


def _parse_int(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise WcnfError(f"{what} is not an integer: {token!r}", lineno) from None


def parse_wcnf(text: str | bytes, kind: str | None = None) -> Formula:
    """Parse WCNF text (either dialect) into a Formula.

    `kind` forces the instance kind; by default it is detected from soft
    weights.  Raises subclasses of WcnfError on malformed input.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    top = None
    declared_vars = None
    saw_clause = False
    max_var = 0
    soft_sum = 0
    clauses: list[Clause] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if saw_clause:
                raise MalformedHeaderError("header after first clause", lineno)
            if top is not None:
                raise MalformedHeaderError("duplicate header", lineno)
            if len(tokens) != 5 or tokens[1] != "wcnf":
                raise MalformedHeaderError(f"expected 'p wcnf <vars> <clauses> <top>', got {line!r}", lineno)
            declared_vars = _parse_int(tokens[2], "variable count", lineno)
            declared_clauses = _parse_int(tokens[3], "clause count", lineno)
            top = _parse_int(tokens[4], "top weight", lineno)
            if declared_vars < 0 or declared_clauses < 0 or top < 1:
                raise MalformedHeaderError("header fields out of range", lineno)
            continue
        # clause line
        saw_clause = True
        if top is not None:
            weight = _parse_int(tokens[0], "clause weight", lineno)
            hard = weight >= top
            if not hard and weight <= 0:
                raise NonPositiveSoftWeightError(f"soft clause weight must be positive, got {weight}", lineno)
            lit_tokens = tokens[1:]
        elif tokens[0] == "h":
            hard, weight = True, 0
            lit_tokens = tokens[1:]
        else:
            hard = False
            weight = _parse_int(tokens[0], "clause weight", lineno)
            if weight <= 0:
                raise NonPositiveSoftWeightError(f"soft clause weight must be positive, got {weight}", lineno)
            lit_tokens = tokens[1:]
        if not lit_tokens or lit_tokens[-1] != "0":
            raise MissingTerminatingZeroError("clause line must end with 0", lineno)
        lits = []
        for tok in lit_tokens[:-1]:
            lit = _parse_int(tok, "literal", lineno)
            if lit == 0:
                raise MissingTerminatingZeroError("terminating 0 before end of line", lineno)
            var = abs(lit)
            if declared_vars is not None and var > declared_vars:
                raise LiteralOutOfRangeError(f"literal {lit} exceeds declared {declared_vars} variables", lineno)
            max_var = max(max_var, var)
            lits.append(lit)
        if not hard:
            if weight > _MAX_WEIGHT:
                raise WeightOverflowError(f"soft weight {weight} exceeds 63-bit range", lineno)
            soft_sum += weight
            if soft_sum > _MAX_WEIGHT:
                raise WeightOverflowError("total soft weight exceeds 63-bit range", lineno)
        clauses.append(Clause(tuple(lits), hard, weight))
    num_vars = declared_vars if declared_vars is not None else max_var
    return Formula(num_vars, clauses, kind=kind)


def write_wcnf(formula: Formula, dialect: str = NEW) -> str:
    """Serialize a formula to WCNF text in the requested dialect.

    Only stored clauses are written; empty clauses folded away during
    normalization are not representable.
    """
    lines = []
    if dialect == CLASSIC:
        top = sum(c.weight for c in formula.clauses if not c.hard) + 1
        lines.append(f"p wcnf {formula.num_vars} {formula.num_clauses} {top}")
        for c in formula.clauses:
            w = top if c.hard else c.weight
            lines.append(f"{w} {' '.join(map(str, c.lits))} 0")
    elif dialect == NEW:
        for c in formula.clauses:
            prefix = "h" if c.hard else str(c.weight)
            lines.append(f"{prefix} {' '.join(map(str, c.lits))} 0")
    else:
        raise ValueError(f"unknown dialect {dialect!r}")
    return "\n".join(lines) + "\n"


def load_wcnf(path: str | os.PathLike, kind: str | None = None) -> Formula:
    with open(path, "rb") as fh:
        return parse_wcnf(fh.read(), kind=kind)


def dump_wcnf(formula: Formula, path: str | os.PathLike, dialect: str = NEW) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_wcnf(formula, dialect=dialect))

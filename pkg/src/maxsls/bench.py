"""Benchmark harness: run solver commands on instance sets and score them.

Solvers are external commands speaking the anytime protocol (`o`/`s`/`v`
lines).  The harness timestamps every `o` line, verifies the final model
against the instance, and aggregates two metrics across instances: `#win.`,
the number of instances where a solver matched the best cost any compared
solver achieved, and `#score`, the average of per-instance scores
(cost_best + 1) / (cost + 1), counting 0 for solvers with no feasible
solution on that instance.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .formula import INFEASIBLE, PMS, Formula, assignment_from_bits, cost
from .wcnf import load_wcnf


class TooLargeError(Exception):
    """Instance is beyond the exhaustive-enumeration bound."""


class ProtocolError(Exception):
    """Solver output violated the anytime protocol or the model is wrong."""


def mse_score(best_cost, found_cost) -> float:
    """Per-instance score: (best + 1) / (found + 1), or 0 without a feasible
    solution.  `best_cost` is the lowest cost among all compared solvers."""
    if found_cost is None or not math.isfinite(found_cost):
        return 0.0
    return (best_cost + 1) / (found_cost + 1)


def brute_force_optimum(formula: Formula, max_vars: int = 24):
    """Exact optimum by enumerating all assignments (vectorized, chunked).

    Returns INFEASIBLE when no assignment satisfies the hard clauses.
    Raises TooLargeError above `max_vars` variables.
    """
    n = formula.num_vars
    if n > max_vars:
        raise TooLargeError(f"{n} variables is beyond the enumeration bound {max_vars}")
    if formula.has_empty_hard:
        return INFEASIBLE
    base = formula.soft_base_cost()
    best = INFEASIBLE
    total = 1 << n
    block = 1 << 20
    one = np.uint64(1)
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total), dtype=np.uint64)
        feasible = np.ones(idx.shape, dtype=bool)
        costs = np.zeros(idx.shape, dtype=np.int64)
        for c in formula.clauses:
            sat = np.zeros(idx.shape, dtype=bool)
            for lit in c.lits:
                bit = (idx >> np.uint64(abs(lit) - 1)) & one
                sat |= (bit == one) if lit > 0 else (bit == np.uint64(0))
            if c.hard:
                feasible &= sat
            else:
                unit = 1 if formula.kind == PMS else c.weight
                costs[~sat] += unit
        if feasible.any():
            m = int(costs[feasible].min())
            if base + m < best:
                best = base + m
    return best


def check_model(formula: Formula, bits: str):
    """Cost of a `v`-line model string under the formula (INFEASIBLE if it
    breaks a hard clause).  Raises ValueError on a bad string."""
    if len(bits) != formula.num_vars:
        raise ValueError(f"model has {len(bits)} bits, expected {formula.num_vars}")
    return cost(formula, assignment_from_bits(bits))


@dataclass
class SolverOutcome:
    """What one solver did on one instance."""

    cost: float = INFEASIBLE
    time_to_best: float | None = None
    o_trace: list[tuple[float, int]] = field(default_factory=list)
    status: str | None = None
    model: str | None = None
    verified: bool = False


@dataclass
class InstanceRecord:
    instance: str
    outcomes: dict[str, SolverOutcome] = field(default_factory=dict)


@dataclass
class BenchmarkReport:
    solvers: list[str]
    num_instances: int
    wins: dict[str, int]
    scores: dict[str, float]
    per_instance: dict[str, dict[str, float]]


def run_solver_on_instance(cmd: list[str], instance: str,
                           cutoff: float | None = None,
                           formula: Formula | None = None,
                           verify: bool = True) -> SolverOutcome:
    """Run one solver command on one instance and collect its outcome.

    `{instance}` and `{cutoff}` placeholders in cmd are substituted.  Every
    `o` line is timestamped against the process start; costs must strictly
    decrease.  With `verify`, the final model must reproduce the last `o`
    cost under the instance.
    """
    argv = [tok.format(instance=instance, cutoff=cutoff) for tok in cmd]
    outcome = SolverOutcome()
    t0 = time.perf_counter()
    proc = subprocess.Popen(argv, stdout=subprocess.PIPE, text=True)
    try:
        for raw in proc.stdout:
            now = time.perf_counter() - t0
            line = raw.strip()
            if line.startswith("o "):
                value = int(line.split()[1])
                if outcome.o_trace and value >= outcome.o_trace[-1][1]:
                    raise ProtocolError(f"non-decreasing o line: {line!r}")
                outcome.o_trace.append((now, value))
                outcome.cost = value
                outcome.time_to_best = now
            elif line.startswith("s "):
                outcome.status = line[2:].strip()
            elif line.startswith("v "):
                outcome.model = line[2:].strip()
    finally:
        grace = 60.0 if cutoff is None else cutoff * 2 + 60.0
        try:
            proc.wait(timeout=grace)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()
            raise ProtocolError(f"solver did not exit within {grace:.0f}s grace")
    if verify:
        if outcome.model is not None:
            if formula is None:
                formula = load_wcnf(instance)
            model_cost = check_model(formula, outcome.model)
            if not outcome.o_trace:
                raise ProtocolError("model without any o line")
            if model_cost != outcome.o_trace[-1][1]:
                raise ProtocolError(
                    f"model cost {model_cost} disagrees with last o line "
                    f"{outcome.o_trace[-1][1]}")
            outcome.verified = True
        elif outcome.o_trace:
            raise ProtocolError("o lines but no final model")
    return outcome


def tally(records: list[InstanceRecord],
          solvers: list[str] | None = None) -> BenchmarkReport:
    """Aggregate #win. and #score over instance records."""
    if solvers is None:
        solvers = []
        for rec in records:
            for name in rec.outcomes:
                if name not in solvers:
                    solvers.append(name)
    wins = {s: 0 for s in solvers}
    sums = {s: 0.0 for s in solvers}
    per_instance: dict[str, dict[str, float]] = {}
    for rec in records:
        finite = [oc.cost for oc in rec.outcomes.values()
                  if math.isfinite(oc.cost)]
        best = min(finite) if finite else None
        row = {}
        for s in solvers:
            oc = rec.outcomes.get(s)
            found = oc.cost if oc is not None else INFEASIBLE
            score = mse_score(best, found) if best is not None else 0.0
            row[s] = score
            sums[s] += score
            if best is not None and found == best:
                wins[s] += 1
        per_instance[rec.instance] = row
    n = len(records)
    scores = {s: (sums[s] / n if n else 0.0) for s in solvers}
    return BenchmarkReport(solvers, n, wins, scores, per_instance)


def run_manifest(manifest_path: str | Path, verify: bool = True,
                 log=None) -> tuple[list[InstanceRecord], BenchmarkReport]:
    """Execute every solver on every instance of a JSON manifest.

    Shape: {"cutoff": seconds, "solvers": {name: [argv...]},
    "instances": [paths...]}; relative instance paths resolve against the
    manifest's directory.
    """
    manifest_path = Path(manifest_path)
    with open(manifest_path, encoding="utf-8") as fh:
        data = json.load(fh)
    cutoff = data.get("cutoff")
    records = []
    for inst in data["instances"]:
        path = Path(inst)
        if not path.is_absolute():
            path = manifest_path.parent / path
        formula = load_wcnf(path) if verify else None
        rec = InstanceRecord(instance=str(path))
        for name, cmd in data["solvers"].items():
            if log is not None:
                print(f"running {name} on {path.name}", file=log, flush=True)
            rec.outcomes[name] = run_solver_on_instance(
                cmd, str(path), cutoff=cutoff, formula=formula, verify=verify)
        records.append(rec)
    report = tally(records, list(data["solvers"]))
    return records, report


def format_table(report: BenchmarkReport) -> str:
    rows = [("solver", "#inst.", "#win.", "#score")]
    for s in report.solvers:
        rows.append((s, str(report.num_instances), str(report.wins[s]),
                     f"{report.scores[s]:.4f}"))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = []
    for r in rows:
        lines.append("  ".join(
            r[i].ljust(widths[i]) if i == 0 else r[i].rjust(widths[i])
            for i in range(4)))
    return "\n".join(lines)


def write_csv(records: list[InstanceRecord], report: BenchmarkReport,
              path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance", "solver", "cost", "time_to_best", "score"])
        for rec in records:
            for s in report.solvers:
                oc = rec.outcomes.get(s)
                score = report.per_instance[rec.instance][s]
                costv = "" if oc is None or not math.isfinite(oc.cost) else int(oc.cost)
                ttb = "" if oc is None or oc.time_to_best is None else f"{oc.time_to_best:.3f}"
                writer.writerow([rec.instance, s, costv, ttb, f"{score:.6f}"])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="maxsls-bench",
        description="Run a solver-comparison manifest and print #win./#score.")
    ap.add_argument("manifest", help="JSON manifest of solvers and instances")
    ap.add_argument("--csv", default=None, metavar="PATH",
                    help="also write per-instance results as CSV")
    ap.add_argument("--no-verify", action="store_true",
                    help="skip model verification against the instances")
    ap.add_argument("--quiet", action="store_true",
                    help="do not log per-run progress to stderr")
    args = ap.parse_args(argv)
    try:
        records, report = run_manifest(args.manifest,
                                       verify=not args.no_verify,
                                       log=None if args.quiet else sys.stderr)
    except (OSError, json.JSONDecodeError, ProtocolError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(format_table(report))
    if args.csv:
        write_csv(records, report, args.csv)
    return 0


if __name__ == "__main__":
    sys.exit(main())

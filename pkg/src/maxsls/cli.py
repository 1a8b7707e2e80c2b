"""Command line front end.

Default output follows the anytime solver protocol: a line `o <cost>` for
every improvement as it happens, then a final status line `s UNKNOWN`,
`s SATISFIABLE` or `s OPTIMUM FOUND`, and for the latter two a model line
`v <bits>` where character i-1 is the value of variable i.  The json mode
swallows intermediate output and prints one structured result instead.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import SearchParams, solve
from .formula import bits_from_assignment
from .weighting import VARIANTS, WeightParams
from .wcnf import WcnfError, load_wcnf


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="maxsls",
        description="Anytime stochastic local search for (weighted) partial MaxSAT.")
    ap.add_argument("instance", help="WCNF file, classic or h-prefixed dialect")
    ap.add_argument("--cutoff", type=float, default=60.0, metavar="SEC",
                    help="wall clock budget in seconds (default 60)")
    ap.add_argument("--max-flips", type=int, default=None, metavar="N",
                    help="stop after N flips instead of the wall clock (deterministic)")
    ap.add_argument("--target-cost", type=int, default=None, metavar="C",
                    help="stop early once the best cost reaches C or lower")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--kind", choices=["auto", "pms", "wpms"], default="auto",
                    help="force the instance kind instead of detecting it")
    ap.add_argument("--bms-k", type=int, default=None, metavar="K",
                    help="samples per variable pick (default 53 plain / 97 weighted)")
    ap.add_argument("--h-inc", type=float, default=None,
                    help="hard weight increment (default 1 plain / 28 weighted)")
    ap.add_argument("--delta", type=float, default=None,
                    help="soft weight growth factor (default 1.00072 plain / 1.001 weighted)")
    ap.add_argument("--weight-variant", choices=list(VARIANTS), default="standard",
                    help="weighting rule variant for ablation runs")
    ap.add_argument("--decimation", choices=["auto", "unh", "up"], default="auto",
                    help="initial assignment scheme (auto: unh for plain, up for weighted)")
    ap.add_argument("--output", choices=["mse", "json"], default="mse")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        formula = load_wcnf(args.instance,
                            kind=None if args.kind == "auto" else args.kind)
    except WcnfError as exc:
        print(f"error: {args.instance}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot read {args.instance}: {exc}", file=sys.stderr)
        return 1
    sp = SearchParams(bms_k=args.bms_k, cutoff_seconds=args.cutoff,
                      seed=args.seed, max_flips=args.max_flips,
                      target_cost=args.target_cost, decimation=args.decimation)
    wp = WeightParams.for_kind(formula.kind, h_inc=args.h_inc,
                               delta=args.delta, variant=args.weight_variant)
    if args.output == "mse":
        def sink(elapsed, cost, values):
            print(f"o {cost}", flush=True)

        result = solve(formula, sp, wp, progress_sink=sink)
        if result.best_assignment is None:
            print("s UNKNOWN", flush=True)
        else:
            print("s OPTIMUM FOUND" if result.proved_optimal else "s SATISFIABLE",
                  flush=True)
            print(f"v {bits_from_assignment(result.best_assignment)}", flush=True)
    else:
        result = solve(formula, sp, wp)
        found = result.best_assignment is not None
        payload = {
            "instance": args.instance,
            "kind": formula.kind,
            "best_cost": result.best_cost if found else None,
            "model": bits_from_assignment(result.best_assignment) if found else None,
            "proved_optimal": result.proved_optimal,
            "time_to_best": result.time_to_best,
            "wall_time": result.wall_time,
            "total_flips": result.total_flips,
            "restarts": result.restarts,
            "trace": [{"elapsed": t.elapsed, "cost": t.cost, "flips": t.flips}
                      for t in result.improvement_trace],
        }
        json.dump(payload, sys.stdout, indent=2)
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())

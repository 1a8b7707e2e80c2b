"""Anytime stochastic local search for (weighted) partial MaxSAT."""

from .formula import (INFEASIBLE, PMS, WPMS, Clause, Formula,
                      assignment_from_bits, better_than, bits_from_assignment,
                      cost, is_feasible, random_assignment)
from .wcnf import (CLASSIC, NEW, WcnfError, dump_wcnf, load_wcnf, parse_wcnf,
                   write_wcnf)
from .weighting import (ALT1, ALT2, STANDARD, VARIANTS, WeightParams,
                        WeightState, initialize_weights, soft_update_fires,
                        update_weights)
from .decimation import (DecimationView, hard_priority_decimate,
                         unit_prop_decimate)
from .engine import (DEFAULT_BMS_K, NoFalsifiedClauseError, RunResult,
                     SearchParams, SearchState, TracePoint, init_state, solve)
from .bench import (BenchmarkReport, InstanceRecord, SolverOutcome,
                    TooLargeError, brute_force_optimum, check_model,
                    mse_score, run_manifest, run_solver_on_instance, tally)

__version__ = "0.1.0"

__all__ = [
    "INFEASIBLE", "PMS", "WPMS", "Clause", "Formula", "assignment_from_bits",
    "better_than", "bits_from_assignment", "cost", "is_feasible",
    "random_assignment", "CLASSIC", "NEW", "WcnfError", "dump_wcnf",
    "load_wcnf", "parse_wcnf", "write_wcnf", "ALT1", "ALT2", "STANDARD",
    "VARIANTS", "WeightParams", "WeightState", "initialize_weights",
    "soft_update_fires", "update_weights", "DecimationView",
    "hard_priority_decimate", "unit_prop_decimate", "DEFAULT_BMS_K",
    "NoFalsifiedClauseError", "RunResult", "SearchParams", "SearchState",
    "TracePoint", "init_state", "solve", "BenchmarkReport", "InstanceRecord",
    "SolverOutcome", "TooLargeError", "brute_force_optimum", "check_model",
    "mse_score", "run_manifest", "run_solver_on_instance", "tally",
    "__version__",
]

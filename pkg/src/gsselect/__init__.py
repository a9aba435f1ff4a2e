"""Minimum-cost ground-station selection under a network outage constraint."""
from ._jit import USE_NUMBA
from .approx import ScaledCosts, error_bound, scale_costs, solve_dpaa
from .baselines import solve_gd_c, solve_gd_p
from .errors import (
    EmptyCatalog,
    EmptyRows,
    GsSelectError,
    Infeasible,
    InvalidConfig,
    InvalidInstance,
    LengthMismatch,
    NoQualifyingColumn,
    NonPositiveCost,
    NonPositiveEpsilon,
    ProbabilityOutOfRange,
    ThresholdOutOfRange,
    TooLargeForExhaustive,
)
from .exact import (
    DpTable,
    SolveReport,
    Status,
    backtrack,
    exhaustive_search,
    extract_optimum,
    fill_table,
    greedy_upper_bound,
    solve_dp,
)
from .harness import ExperimentConfig, SweepRow, emit_results, generate_instances, paper_config, run_sweep
from .model import (
    TOL_FEAS,
    Instance,
    LinearForm,
    Selection,
    Site,
    build_instance,
    check_feasible,
    evaluate,
    gcd_reduce,
    load_instance,
    make_instance,
    to_linear_form,
)

__version__ = "0.1.0"

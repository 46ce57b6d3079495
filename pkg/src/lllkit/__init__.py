"""Workbench for constructive Lovász Local Lemma experiments."""

from .analysis import (
    CriterionReport,
    EventDecomposition,
    bound_runtime,
    bound_runtime_per_event,
    check_pegden,
    check_symmetric,
    independent_subset_sum,
    theta,
)
from .engine import ResampleLog, run_mt, run_mt_dfs
from .entropy import distortion_bounds, mt_entropy_bound, renyi
from .events import BadEvent, BadEventFamily, DependencyOracle, conjunction_event
from .permutation import PermEvent, PermutationState, run_mt_swapping
from .space import Categorical, ProductSpace, UnitInterval
from .truncated import (
    ParallelParams,
    run_parallel_truncated,
    run_truncated,
    solve_parallel_params,
    symmetric_mu,
)
from .witness import build_event_tree, build_tree, enumerate_structures, verify_wtl

__all__ = [
    "BadEvent",
    "BadEventFamily",
    "Categorical",
    "CriterionReport",
    "DependencyOracle",
    "EventDecomposition",
    "ParallelParams",
    "PermEvent",
    "PermutationState",
    "ProductSpace",
    "ResampleLog",
    "UnitInterval",
    "bound_runtime",
    "bound_runtime_per_event",
    "build_event_tree",
    "build_tree",
    "check_pegden",
    "check_symmetric",
    "conjunction_event",
    "distortion_bounds",
    "enumerate_structures",
    "independent_subset_sum",
    "mt_entropy_bound",
    "renyi",
    "run_mt",
    "run_mt_dfs",
    "run_mt_swapping",
    "run_parallel_truncated",
    "run_truncated",
    "solve_parallel_params",
    "symmetric_mu",
    "theta",
    "verify_wtl",
]

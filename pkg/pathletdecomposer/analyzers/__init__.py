from . import metrics
from .baseline import baseline_per_trajectory
from .candidate_analyzer import build_cover_matrices, build_matrices, build_usage_mask, enumerate_candidates
from .decomposer import PathletIndex, cover_ratio, decompose, decompose_all, encode_new, reconstruct
from .relaxed_solver import solve_relaxed, surrogate_objective_and_gradient, true_objective
from .rounding import extract_dictionary, randomized_round, resolve_theta, round_until_good, verify_bound

__all__ = [
    "enumerate_candidates",
    "build_matrices",
    "build_cover_matrices",
    "build_usage_mask",
    "true_objective",
    "surrogate_objective_and_gradient",
    "solve_relaxed",
    "resolve_theta",
    "randomized_round",
    "round_until_good",
    "extract_dictionary",
    "verify_bound",
    "PathletIndex",
    "decompose",
    "decompose_all",
    "reconstruct",
    "encode_new",
    "cover_ratio",
    "baseline_per_trajectory",
    "metrics",
]

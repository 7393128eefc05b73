"""
PathletDecomposer - Pathlet dictionary learning for road-network trajectories

This package learns compact dictionaries of frequently travelled subpaths (pathlets)
from map-matched trajectories, decomposes trajectories over them, and evaluates how
well the dictionaries compress and reconstruct a corpus.
"""

__version__ = "1.0.0"
__author__ = "PathletDecomposer Team"

from . import errors
from .analyzers import (
    baseline_per_trajectory,
    decompose,
    encode_new,
    enumerate_candidates,
    metrics,
    randomized_round,
    solve_relaxed,
    verify_bound,
)
from .core import RoadGraph, load_graph, load_trajectories
from .models import Dictionary, MultiScaleDictionary, Pathlet, RunConfig, Trajectory
from .pathlet_learner import PathletLearner
from .services import HierarchicalLearner, evaluate

__all__ = [
    "RoadGraph",
    "load_graph",
    "load_trajectories",
    "Trajectory",
    "Pathlet",
    "Dictionary",
    "MultiScaleDictionary",
    "RunConfig",
    "enumerate_candidates",
    "solve_relaxed",
    "randomized_round",
    "verify_bound",
    "decompose",
    "encode_new",
    "baseline_per_trajectory",
    "metrics",
    "errors",
    "PathletLearner",
    "HierarchicalLearner",
    "evaluate",
]

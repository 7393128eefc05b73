"""
Services package for PathletDecomposer.

This package contains the service classes and functions that orchestrate the analyzers:
hierarchical learning, evaluation, export, synthetic corpora and run manifests.
"""

from .evaluation_service import (
    evaluate,
    feature_frame,
    lambda_sweep,
    mdl_score,
    partial_reconstruction_curve,
    time_encoding,
    time_encoding_cos,
)
from .export_service import ExportService, geojson_collection, load_dictionary
from .hierarchy_learner import HierarchicalLearner, learn_cell, learn_level, lift_level, unify
from .run_manifest import build_manifest, load_run_config, split_indices
from .synthetic_generator import SyntheticCorpus, SyntheticGenerator, generate_synthetic, grid_graph, write_synthetic

__all__ = [
    "HierarchicalLearner",
    "learn_cell",
    "learn_level",
    "lift_level",
    "unify",
    "evaluate",
    "mdl_score",
    "lambda_sweep",
    "partial_reconstruction_curve",
    "time_encoding",
    "time_encoding_cos",
    "feature_frame",
    "ExportService",
    "load_dictionary",
    "geojson_collection",
    "SyntheticGenerator",
    "SyntheticCorpus",
    "generate_synthetic",
    "grid_graph",
    "write_synthetic",
    "load_run_config",
    "split_indices",
    "build_manifest",
]

"""
Data models package for PathletDecomposer.

This package contains all data classes and models used throughout
the PathletDecomposer application for type-safe data structures.
"""

from .analysis import EvalReport, RunConfig
from .decomposition import BaselineResult, Decomposition, RepresentationVector
from .hierarchy import CellResult, LevelResult, MultiScaleDictionary, UnifiedColumn
from .pathlet import CandidateSet, Dictionary, DictionaryOrigin, EdgeSeq, Pathlet, Trajectory
from .solution import (
    BinarySolution,
    BoundReport,
    FractionalSolution,
    LearningConfig,
    RoundingConfig,
    SmoothingMode,
    SolverConfig,
    ThetaMode,
)

__all__ = [
    # Pathlet models
    "EdgeSeq",
    "Trajectory",
    "Pathlet",
    "DictionaryOrigin",
    "Dictionary",
    "CandidateSet",
    # Solution models
    "SmoothingMode",
    "ThetaMode",
    "SolverConfig",
    "RoundingConfig",
    "LearningConfig",
    "FractionalSolution",
    "BinarySolution",
    "BoundReport",
    # Decomposition models
    "Decomposition",
    "RepresentationVector",
    "BaselineResult",
    # Hierarchy models
    "UnifiedColumn",
    "MultiScaleDictionary",
    "CellResult",
    "LevelResult",
    # Analysis models
    "EvalReport",
    "RunConfig",
]

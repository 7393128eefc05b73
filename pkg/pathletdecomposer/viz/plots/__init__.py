"""
The plots module provides the chart classes for evaluation tables.
"""

from .base import BasePlotter
from .curve import CurvePlotter
from .sweep import SweepPlotter

__all__ = ["BasePlotter", "SweepPlotter", "CurvePlotter"]

from .plots import BasePlotter, CurvePlotter, SweepPlotter

__all__ = ["BasePlotter", "SweepPlotter", "CurvePlotter"]

"""
Cover Ratio Analyzer - how much of a corpus a dictionary can reconstruct.
"""

from typing import Any, Dict, List

from ..decomposer import DictionaryLike
from .base import BaseMetricAnalyzer


class CoverRatioAnalyzer(BaseMetricAnalyzer):
    """Trajectory-level and edge-level cover ratios."""

    def get_metric_name(self) -> str:
        return "Cover Ratio"

    def get_description(self) -> str:
        return "Fraction of trajectories fully reconstructed and fraction of edge occurrences covered."

    def calculate(self, dictionary: DictionaryLike, **kwargs) -> Dict[str, Any]:
        if not self.trajectories:
            return {"trajectory_cover": 1.0, "edge_cover": 1.0, "uncovered_edges": 0, "total_edges": 0}
        decompositions = self.get_decompositions(dictionary)
        total_edges = sum(len(t) for t in self.trajectories)
        uncovered = sum(d.n_uncovered for d in decompositions)
        return {
            "trajectory_cover": sum(d.covered for d in decompositions) / len(decompositions),
            "edge_cover": 1.0 - uncovered / total_edges if total_edges else 1.0,
            "uncovered_edges": uncovered,
            "total_edges": total_edges,
        }

    def get_recommendations(self, results: Dict[str, Any]) -> List[str]:
        if results["trajectory_cover"] < 0.9:
            return ["Less than 90% of trajectories are covered; the corpus may contain many unseen edges"]
        return []

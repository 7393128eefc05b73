"""
Representation Cost Analyzer - average number of pathlets per reconstructed trajectory.
"""

from typing import Any, Dict, List

from ..decomposer import DictionaryLike
from .base import BaseMetricAnalyzer


class RepresentationCostAnalyzer(BaseMetricAnalyzer):
    """
    Mean rc(t, P) over the trajectories the dictionary fully reconstructs.

    Uncovered trajectories are excluded from the mean and counted separately.
    """

    def get_metric_name(self) -> str:
        return "Representation Cost"

    def get_description(self) -> str:
        return "Average minimum number of dictionary pathlets needed to rebuild a covered trajectory."

    def calculate(self, dictionary: DictionaryLike, **kwargs) -> Dict[str, Any]:
        decompositions = self.get_decompositions(dictionary)
        covered = [d for d in decompositions if d.covered]
        total_cost = sum(d.cost for d in covered)
        return {
            "mean_representation_cost": total_cost / len(covered) if covered else 0.0,
            "total_cost": total_cost,
            "n_covered": len(covered),
            "n_trajectories": len(decompositions),
        }

    def get_recommendations(self, results: Dict[str, Any]) -> List[str]:
        recommendations = []
        if results["n_covered"] < results["n_trajectories"]:
            missing = results["n_trajectories"] - results["n_covered"]
            recommendations.append(f"{missing} trajectories are not covered and are excluded from the mean")
        return recommendations

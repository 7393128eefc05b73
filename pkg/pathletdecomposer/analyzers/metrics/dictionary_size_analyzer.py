"""
Dictionary Size Analyzer - number of pathlets relative to the training corpus.
"""

from typing import Any, Dict, List, Optional

from ..decomposer import DictionaryLike, PathletIndex
from .base import BaseMetricAnalyzer


class DictionarySizeAnalyzer(BaseMetricAnalyzer):
    """Reports size(P) and size(P) / |T|."""

    def get_metric_name(self) -> str:
        return "Dictionary Size"

    def get_description(self) -> str:
        return "Number of pathlets in the dictionary, absolute and per training trajectory."

    def calculate(self, dictionary: DictionaryLike, n_reference: Optional[int] = None, **kwargs) -> Dict[str, Any]:
        """
        Calculate the dictionary size.

        Args:
            dictionary: Dictionary to measure
            n_reference: Trajectory count to normalise by (the training set size);
                defaults to the analyzer's corpus

        Returns:
            Dictionary with the size, the normalised size and the summed pathlet length
        """
        index = PathletIndex.of(dictionary)
        n_reference = len(self.trajectories) if n_reference is None else n_reference
        size = len(index)
        return {
            "dictionary_size": size,
            "dictionary_size_over_T": size / n_reference if n_reference else 0.0,
            "total_pathlet_edges": sum(len(seq) for seq in index.columns.values()),
            "n_reference": n_reference,
        }

    def get_recommendations(self, results: Dict[str, Any]) -> List[str]:
        recommendations = []
        if results["dictionary_size_over_T"] > 2.0:
            recommendations.append("Dictionary is larger than twice the corpus; consider a smaller lambda")
        return recommendations

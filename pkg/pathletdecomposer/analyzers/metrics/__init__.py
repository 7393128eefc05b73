"""
Dictionary quality metrics, looked up by name.

Each analyzer is bound to a corpus and scores any dictionary on it: size, representation
cost, cover ratios and the MDL compression score.
"""

from typing import Dict, List, Optional, Sequence, Type

from ...models import Trajectory
from .base import BaseMetricAnalyzer
from .cover_ratio_analyzer import CoverRatioAnalyzer
from .dictionary_size_analyzer import DictionarySizeAnalyzer
from .mdl_score_analyzer import MDLScoreAnalyzer, code_width
from .representation_cost_analyzer import RepresentationCostAnalyzer

METRIC_ANALYZERS: Dict[str, Type[BaseMetricAnalyzer]] = {
    "dictionary_size": DictionarySizeAnalyzer,
    "representation_cost": RepresentationCostAnalyzer,
    "cover_ratio": CoverRatioAnalyzer,
    "mdl_score": MDLScoreAnalyzer,
}


def get_available_metrics() -> List[str]:
    return list(METRIC_ANALYZERS)


def create_metric_analyzer(
    metric_name: str, trajectories: Sequence[Trajectory], n_edges: Optional[int] = None
) -> BaseMetricAnalyzer:
    """
    Build the analyzer registered as ``metric_name`` for ``trajectories``.

    Raises:
        ValueError: If no analyzer is registered under that name
    """
    try:
        analyzer_class = METRIC_ANALYZERS[metric_name]
    except KeyError:
        raise ValueError(
            f"Unknown metric '{metric_name}'. Available metrics: {', '.join(get_available_metrics())}"
        ) from None
    return analyzer_class(trajectories, n_edges)


__all__ = [
    "BaseMetricAnalyzer",
    "DictionarySizeAnalyzer",
    "RepresentationCostAnalyzer",
    "CoverRatioAnalyzer",
    "MDLScoreAnalyzer",
    "code_width",
    "METRIC_ANALYZERS",
    "get_available_metrics",
    "create_metric_analyzer",
]

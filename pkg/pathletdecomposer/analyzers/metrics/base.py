"""
Abstract base for metrics that score a pathlet dictionary against a corpus.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ...models import Decomposition, Trajectory
from ..decomposer import DictionaryLike, PathletIndex, decompose_all


class BaseMetricAnalyzer(ABC):
    """
    A metric bound to one corpus and applied to any number of dictionaries.

    Decompositions are the expensive part of every metric, so they are computed once
    per dictionary object and kept until ``clear_cache`` is called.
    """

    def __init__(self, trajectories: Sequence[Trajectory], n_edges: Optional[int] = None):
        """
        Args:
            trajectories: Corpus the dictionary is scored on
            n_edges: Size of the edge universe; code-length metrics need it
        """
        self.trajectories = list(trajectories)
        self.n_edges = n_edges
        self.cache: Dict[int, Tuple[DictionaryLike, List[Decomposition]]] = {}

    @abstractmethod
    def calculate(self, dictionary: DictionaryLike, **kwargs) -> Dict[str, Any]:
        """Score ``dictionary`` on the corpus; keys are metric specific."""

    @abstractmethod
    def get_metric_name(self) -> str:
        pass

    @abstractmethod
    def get_description(self) -> str:
        pass

    def get_recommendations(self, results: Dict[str, Any]) -> List[str]:
        """Hints for tuning the learner, derived from ``calculate`` output."""
        return []

    def clear_cache(self):
        self.cache.clear()

    def get_decompositions(self, dictionary: DictionaryLike) -> List[Decomposition]:
        """Decompose the corpus over ``dictionary``, once per dictionary object."""
        cached = self.cache.get(id(dictionary))
        if cached is not None and cached[0] is dictionary:
            return cached[1]
        decompositions = decompose_all(self.trajectories, PathletIndex.of(dictionary))
        self.cache[id(dictionary)] = (dictionary, decompositions)
        return decompositions

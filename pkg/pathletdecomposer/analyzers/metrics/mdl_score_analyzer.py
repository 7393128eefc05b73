"""
MDL Score Analyzer - compression achieved by describing a corpus with a dictionary.

Codes are fixed width: an edge costs ``b_e = max(1, ceil(log2 |E|))`` bits and a
dictionary reference costs ``b_p = max(1, ceil(log2 size(P)))`` bits.

    L(D)     = sum over trajectories of len(t) * b_e
    L(C)     = sum over pathlets of len(p) * b_e
    L(D | C) = sum over trajectories of rc(t) * b_p + uncovered edges * b_e
    score    = (L(C) + L(D | C)) / L(D)

A score below 1 means the dictionary compresses the corpus.
"""

import math
from typing import Any, Dict, List

from ...errors import EmptyCorpus
from ..decomposer import DictionaryLike, PathletIndex
from .base import BaseMetricAnalyzer


def code_width(n_symbols: int) -> int:
    """Bits of a fixed-width code over ``n_symbols`` symbols, at least 1."""
    if n_symbols <= 1:
        return 1
    return max(1, math.ceil(math.log2(n_symbols)))


class MDLScoreAnalyzer(BaseMetricAnalyzer):
    """Minimum description length ratio of a dictionary on a corpus."""

    def get_metric_name(self) -> str:
        return "MDL Score"

    def get_description(self) -> str:
        return "Bits for the dictionary plus the encoded corpus, divided by bits for the raw corpus."

    def calculate(self, dictionary: DictionaryLike, **kwargs) -> Dict[str, Any]:
        """
        Calculate the MDL score.

        Raises:
            EmptyCorpus: If there are no trajectories, no edges or the edge universe is unknown
        """
        if not self.trajectories or not sum(len(t) for t in self.trajectories):
            raise EmptyCorpus("MDL score needs at least one non-empty trajectory")
        if not self.n_edges:
            raise EmptyCorpus("MDL score needs a non-empty edge universe")

        index = PathletIndex.of(dictionary)
        b_e = code_width(self.n_edges)
        b_p = code_width(len(index))
        decompositions = self.get_decompositions(dictionary)

        data_bits = sum(len(t) for t in self.trajectories) * b_e
        dictionary_bits = sum(len(seq) for seq in index.columns.values()) * b_e
        encoded_bits = sum(d.cost for d in decompositions) * b_p + sum(d.n_uncovered for d in decompositions) * b_e
        return {
            "mdl_score": (dictionary_bits + encoded_bits) / data_bits,
            "data_bits": data_bits,
            "dictionary_bits": dictionary_bits,
            "encoded_bits": encoded_bits,
            "edge_code_bits": b_e,
            "pathlet_code_bits": b_p,
        }

    def get_recommendations(self, results: Dict[str, Any]) -> List[str]:
        if results["mdl_score"] >= 1.0:
            return ["Dictionary does not compress the corpus; try a larger lambda or a lower c_min"]
        return []

"""
Candidate pathlet enumeration and cover-matrix construction.

Sequences handled here are generic: edge ids at the finest level, finer-level pathlet ids
(tokens) when lifting a hierarchy level.
"""

import logging
from collections import Counter
from typing import Dict, Iterable, Iterator, Sequence, Tuple

import numpy as np

from ..core import RoadGraph, SparseBinaryMatrix
from ..errors import ConfigError, IndexOutOfRange
from ..models import CandidateSet, EdgeSeq, Pathlet, Trajectory

logger = logging.getLogger(__name__)

DEFAULT_MAX_LEN = 10
DEFAULT_C_MIN = 3


def iter_subpaths(edge_seq: Sequence[int], max_len: int) -> Iterator[EdgeSeq]:
    """Yield every contiguous subpath of length 1..max_len, shortest first per start."""
    n = len(edge_seq)
    for start in range(n):
        for end in range(start + 1, min(start + max_len, n) + 1):
            yield tuple(edge_seq[start:end])


def count_support(sequences: Iterable[Sequence[int]], max_len: int) -> Counter:
    """Number of sequences containing each distinct subpath at least once."""
    support: Counter = Counter()
    for seq in sequences:
        support.update(set(iter_subpaths(seq, max_len)))
    return support


def enumerate_candidates(
    trajectories: Sequence[Trajectory], max_len: int = DEFAULT_MAX_LEN, c_min: int = DEFAULT_C_MIN
) -> CandidateSet:
    """
    Enumerate the candidate pathlets of a trajectory collection.

    Keeps every distinct subpath of length <= ``max_len`` supported by at least ``c_min``
    trajectories, and every length-1 subpath regardless of support.

    Args:
        trajectories: Training trajectories
        max_len: Longest subpath considered
        c_min: Minimum number of supporting trajectories

    Returns:
        CandidateSet ordered by length, then edge sequence; pathlet ids equal positions
    """
    if max_len < 1:
        raise ConfigError(f"max_len must be at least 1, got {max_len}")
    if c_min < 1:
        raise ConfigError(f"c_min must be at least 1, got {c_min}")

    support = count_support((t.edge_seq for t in trajectories), max_len)
    kept = sorted((seq for seq, count in support.items() if count >= c_min or len(seq) == 1), key=lambda s: (len(s), s))
    pathlets = tuple(Pathlet(i, seq, support=support[seq]) for i, seq in enumerate(kept))

    logger.info(f"Enumerated {len(pathlets)} candidates ({len(support)} before the support filter)")
    return CandidateSet(pathlets=pathlets, max_len=max_len, c_min=c_min, n_before_filter=len(support))


def build_cover_matrices(
    sequences: Sequence[Sequence[int]], candidate_sequences: Sequence[Sequence[int]], n_rows: int
) -> Tuple[SparseBinaryMatrix, SparseBinaryMatrix]:
    """
    Build M (rows x sequences) and D (rows x candidates) over a universe of ``n_rows`` ids.

    Raises:
        IndexOutOfRange: If any id lies outside ``[0, n_rows)``
    """
    for seq in list(sequences) + list(candidate_sequences):
        for item in seq:
            if not 0 <= item < n_rows:
                raise IndexOutOfRange(f"Id {item} outside a universe of {n_rows}")
    M = SparseBinaryMatrix.from_coordinates(
        n_rows, len(sequences), ((e, j) for j, seq in enumerate(sequences) for e in seq)
    )
    D = SparseBinaryMatrix.from_coordinates(
        n_rows, len(candidate_sequences), ((e, i) for i, seq in enumerate(candidate_sequences) for e in seq)
    )
    return M, D


def build_matrices(
    trajectories: Sequence[Trajectory], candidates: CandidateSet, graph: RoadGraph
) -> Tuple[SparseBinaryMatrix, SparseBinaryMatrix]:
    """
    Build the edge x trajectory matrix M and the edge x candidate matrix D.

    Returns:
        (M, D) with ``|E|`` rows each
    """
    return build_cover_matrices([t.edge_seq for t in trajectories], candidates.sequences, graph.n_edges)


def build_usage_mask(sequences: Sequence[Sequence[int]], candidates: CandidateSet) -> np.ndarray:
    """
    Boolean ``|candidates| x |sequences|`` mask, True where the candidate is a contiguous
    subpath of the sequence.
    """
    mask = np.zeros((len(candidates), len(sequences)), dtype=bool)
    index: Dict[EdgeSeq, int] = candidates.index
    for j, seq in enumerate(sequences):
        for sub in iter_subpaths(seq, candidates.max_len):
            i = index.get(sub)
            if i is not None:
                mask[i, j] = True
    return mask

"""
Minimum-pathlet decomposition of trajectories over a fixed dictionary.

A decomposition writes a trajectory as a concatenation of dictionary pathlets. The
minimum number of pathlets needed is the representation cost rc(t, P).
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core import SparseBinaryMatrix
from ..models import (
    Decomposition,
    Dictionary,
    EdgeSeq,
    MultiScaleDictionary,
    RepresentationVector,
    RoundingConfig,
    SolverConfig,
    Trajectory,
)
from .relaxed_solver import solve_relaxed
from .rounding import covers, resolve_theta, sample_binary

logger = logging.getLogger(__name__)

_SKIP = -1


class PathletIndex:
    """
    Dictionary columns indexed by their first edge.

    Columns are ``(id, edge_seq)`` pairs. Identical edge sequences under different ids
    are allowed, which is how the unified multi-scale dictionary keeps one column per level.
    """

    def __init__(self, columns: Sequence[Tuple[int, EdgeSeq]]):
        self.columns: Dict[int, EdgeSeq] = {}
        self.by_first_edge: Dict[int, List[Tuple[int, EdgeSeq]]] = {}
        for column_id, edge_seq in columns:
            edge_seq = tuple(edge_seq)
            if not edge_seq:
                continue
            self.columns[column_id] = edge_seq
            self.by_first_edge.setdefault(edge_seq[0], []).append((column_id, edge_seq))
        for matches in self.by_first_edge.values():
            matches.sort(key=lambda item: (-len(item[1]), item[1], item[0]))

    @classmethod
    def of(cls, dictionary: "DictionaryLike") -> "PathletIndex":
        if isinstance(dictionary, PathletIndex):
            return dictionary
        if isinstance(dictionary, MultiScaleDictionary):
            return cls(dictionary.column_pairs())
        if isinstance(dictionary, Dictionary):
            return cls(dictionary.columns())
        return cls(dictionary)

    def __len__(self) -> int:
        return len(self.columns)

    def matches_at(self, edge_seq: Sequence[int], start: int) -> List[Tuple[int, EdgeSeq]]:
        """Columns equal to ``edge_seq[start:start + len(column)]``, longest first."""
        result = []
        for column_id, pathlet in self.by_first_edge.get(edge_seq[start], ()):
            end = start + len(pathlet)
            if end <= len(edge_seq) and tuple(edge_seq[start:end]) == pathlet:
                result.append((column_id, pathlet))
        return result

    def segment(self, edge_seq: Sequence[int]) -> Tuple[List[int], List[int]]:
        """
        Exact minimum segmentation of ``edge_seq``.

        Solved as a shortest path over positions from the back. Edges no column can cover
        are skipped and reported, so the result is the best partial cover: fewest
        uncovered edges, then fewest pathlets, then the longest first pathlet, then the
        lexicographically smallest first pathlet, then the smallest column id. Equal-length
        matches at one position share their edge sequence, so the column id is what separates
        duplicate columns of a multi-scale dictionary.

        Returns:
            (column ids in order, uncovered edge ids in order)
        """
        n = len(edge_seq)
        best: List[Tuple[int, int, int, EdgeSeq, int]] = [(0, 0, 0, (), 0)] * (n + 1)
        step: List[Tuple[int, int]] = [(_SKIP, 1)] * (n + 1)
        for i in range(n - 1, -1, -1):
            uncovered, count = best[i + 1][0], best[i + 1][1]
            choice = (uncovered + 1, count, 0, (), _SKIP)
            choice_step = (_SKIP, 1)
            for column_id, pathlet in self.matches_at(edge_seq, i):
                j = i + len(pathlet)
                key = (best[j][0], best[j][1] + 1, -len(pathlet), pathlet, column_id)
                if key < choice:
                    choice, choice_step = key, (column_id, len(pathlet))
            best[i], step[i] = choice, choice_step

        ids: List[int] = []
        uncovered_edges: List[int] = []
        i = 0
        while i < n:
            column_id, length = step[i]
            if column_id == _SKIP:
                uncovered_edges.append(edge_seq[i])
            else:
                ids.append(column_id)
            i += length
        return ids, uncovered_edges


DictionaryLike = Union[Dictionary, MultiScaleDictionary, PathletIndex, Sequence[Tuple[int, EdgeSeq]]]


def decompose(trajectory: Trajectory, dictionary: DictionaryLike) -> Decomposition:
    """
    Decompose a trajectory into the fewest dictionary pathlets.

    Args:
        trajectory: Trajectory to represent
        dictionary: Dictionary, multi-scale dictionary, prepared index or (id, edge_seq) pairs

    Returns:
        Decomposition; ``covered`` is False when some edges cannot be reconstructed
    """
    index = PathletIndex.of(dictionary)
    ids, uncovered = index.segment(trajectory.edge_seq)
    return Decomposition(
        traj_id=trajectory.traj_id,
        pathlet_ids=tuple(ids),
        cost=len(ids),
        covered=not uncovered,
        uncovered_edges=tuple(uncovered),
    )


def decompose_all(trajectories: Sequence[Trajectory], dictionary: DictionaryLike) -> List[Decomposition]:
    index = PathletIndex.of(dictionary)
    return [decompose(t, index) for t in trajectories]


def reconstruct(decomposition: Decomposition, dictionary: DictionaryLike) -> EdgeSeq:
    """Concatenate the edge sequences of the pathlets of a decomposition."""
    index = PathletIndex.of(dictionary)
    return tuple(e for column_id in decomposition.pathlet_ids for e in index.columns[column_id])


def cover_ratio(trajectories: Sequence[Trajectory], dictionary: DictionaryLike) -> Tuple[float, float]:
    """
    Fraction of trajectories fully reconstructed and fraction of edge occurrences covered.

    An empty corpus is trivially covered and yields (1.0, 1.0).
    """
    if not trajectories:
        return 1.0, 1.0
    decompositions = decompose_all(trajectories, dictionary)
    n_covered = sum(d.covered for d in decompositions)
    total_edges = sum(len(t) for t in trajectories)
    uncovered_edges = sum(d.n_uncovered for d in decompositions)
    edge_cover = 1.0 - uncovered_edges / total_edges if total_edges else 1.0
    return n_covered / len(trajectories), edge_cover


def _relaxed_columns(
    trajectory: Trajectory,
    index: PathletIndex,
    solver_config: Optional[SolverConfig],
    rounding_config: Optional[RoundingConfig],
    seed: Optional[int],
) -> PathletIndex:
    """Columns selected by solving the single-trajectory relaxation and rounding it."""
    edge_seq = trajectory.edge_seq
    relevant = sorted({m for i in range(len(edge_seq)) for m in index.matches_at(edge_seq, i)})
    coverable = sorted({e for _, pathlet in relevant for e in pathlet})
    if not relevant:
        return index
    row_of = {e: r for r, e in enumerate(coverable)}
    M = SparseBinaryMatrix.from_coordinates(len(coverable), 1, ((r, 0) for r in range(len(coverable))))
    D = SparseBinaryMatrix.from_coordinates(
        len(coverable), len(relevant), ((row_of[e], c) for c, (_, pathlet) in enumerate(relevant) for e in pathlet)
    )
    fractional = solve_relaxed(M, D, solver_config)
    rounding_config = rounding_config or RoundingConfig()
    theta = resolve_theta(rounding_config.theta_mode, 1, rounding_config.theta_value, rounding_config.theta_floor)
    for child in np.random.SeedSequence(seed).spawn(rounding_config.max_attempts):
        R_r = sample_binary(fractional.R_star, theta, np.random.default_rng(child))
        if covers(R_r, M, D):
            return PathletIndex([relevant[c] for c in np.flatnonzero(R_r[:, 0]).tolist()])
    logger.info(f"No covering draw for trajectory {trajectory.traj_id}; using every matching column")
    return PathletIndex(relevant)


def encode_new(
    trajectory: Trajectory,
    dictionary: DictionaryLike,
    method: str = "exact",
    solver_config: Optional[SolverConfig] = None,
    rounding_config: Optional[RoundingConfig] = None,
    seed: Optional[int] = None,
) -> RepresentationVector:
    """
    Encode a trajectory as a sparse binary vector over the dictionary columns.

    The exact method runs the segmentation DP over all columns of all levels. The relaxed
    method first selects columns by solving and rounding the single-trajectory relaxation,
    then segments over the selected columns only.

    Args:
        trajectory: Trajectory to encode
        dictionary: Usually the unified multi-scale dictionary
        method: ``"exact"`` or ``"relaxed"``
        solver_config: Solver settings for the relaxed method
        rounding_config: Rounding settings for the relaxed method
        seed: Seed for the relaxed method

    Returns:
        RepresentationVector with the chosen column ids and any uncovered edges
    """
    if method not in ("exact", "relaxed"):
        raise ValueError(f"Unknown encoding method: {method}")
    index = PathletIndex.of(dictionary)
    ids, uncovered = index.segment(trajectory.edge_seq)
    if method == "relaxed":
        selected = _relaxed_columns(trajectory, index, solver_config, rounding_config, seed)
        relaxed_ids, relaxed_uncovered = selected.segment(trajectory.edge_seq)
        # a covering draw may still overlap instead of tiling the trajectory
        if len(relaxed_uncovered) <= len(uncovered):
            ids, uncovered = relaxed_ids, relaxed_uncovered
    return RepresentationVector(
        traj_id=trajectory.traj_id,
        active_ids=tuple(sorted(set(ids))),
        uncovered_edges=tuple(uncovered),
    )

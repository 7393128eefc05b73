"""
Per-trajectory weighted decomposition baseline.

Each trajectory independently picks the concatenation of candidates minimising
sum(lambda + 1 / support(p)). Frequent pathlets are cheap, so trajectories tend to agree
on shared pathlets without any global coordination.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import InfeasibleSolution
from ..models import BaselineResult, CandidateSet, Dictionary, DictionaryOrigin, EdgeSeq, Trajectory
from .decomposer import PathletIndex

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-12


def _weighted_segmentation(
    edge_seq: EdgeSeq, index: PathletIndex, weights: Dict[int, float]
) -> Optional[Tuple[float, List[int]]]:
    n = len(edge_seq)
    # best[i]: (cost, pathlet edge sequences, ids) of the cheapest segmentation of edge_seq[i:]
    best: List[Optional[Tuple[float, Tuple[EdgeSeq, ...], Tuple[int, ...]]]] = [None] * (n + 1)
    best[n] = (0.0, (), ())
    for i in range(n - 1, -1, -1):
        for pathlet_id, pathlet in index.matches_at(edge_seq, i):
            tail = best[i + len(pathlet)]
            if tail is None:
                continue
            option = (weights[pathlet_id] + tail[0], (pathlet,) + tail[1], (pathlet_id,) + tail[2])
            current = best[i]
            if current is None or option[0] < current[0] - TIE_TOLERANCE:
                best[i] = option
            elif abs(option[0] - current[0]) <= TIE_TOLERANCE and option[1] < current[1]:
                best[i] = option
    if best[0] is None:
        return None
    return best[0][0], list(best[0][2])


def baseline_per_trajectory(
    trajectories: Sequence[Trajectory], candidates: CandidateSet, lambda_: float = 0.1
) -> BaselineResult:
    """
    Minimise the per-trajectory weighted objective exactly.

    Ties within 1e-12 go to the lexicographically smallest sequence of pathlet edge
    sequences.

    Args:
        trajectories: Training trajectories
        candidates: Candidate set with trajectory supports
        lambda_: Weight added to every selected pathlet

    Returns:
        BaselineResult with per-trajectory pathlet ids, the total objective and the
        dictionary formed by every pathlet used

    Raises:
        InfeasibleSolution: If a trajectory cannot be segmented by the candidates
    """
    index = PathletIndex([(p.pathlet_id, p.edge_seq) for p in candidates.pathlets])
    weights = {p.pathlet_id: lambda_ + 1.0 / max(p.support, 1) for p in candidates.pathlets}

    assignments: Dict[int, Tuple[int, ...]] = {}
    objective = 0.0
    for trajectory in trajectories:
        result = _weighted_segmentation(trajectory.edge_seq, index, weights)
        if result is None:
            raise InfeasibleSolution(f"Trajectory {trajectory.traj_id} cannot be segmented by the candidates")
        cost, ids = result
        assignments[trajectory.traj_id] = tuple(ids)
        objective += cost

    used = sorted({i for ids in assignments.values() for i in ids})
    by_id = {p.pathlet_id: p for p in candidates.pathlets}
    dictionary = Dictionary(
        tuple(by_id[i] for i in used), DictionaryOrigin(lambda_=lambda_, method="per_trajectory_baseline")
    )
    logger.info(f"Baseline objective {objective:.4f} with {dictionary.size} pathlets")
    return BaselineResult(assignments=assignments, objective=objective, dictionary=dictionary)

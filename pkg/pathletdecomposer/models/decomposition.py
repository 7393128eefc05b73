"""
Decomposition data models for PathletDecomposer.
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple


@dataclass(frozen=True)
class Decomposition:
    """A trajectory written as a concatenation of dictionary pathlets."""

    traj_id: int
    pathlet_ids: Tuple[int, ...]
    cost: int
    covered: bool
    uncovered_edges: Tuple[int, ...] = ()

    @property
    def n_uncovered(self) -> int:
        return len(self.uncovered_edges)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "traj_id": self.traj_id,
            "pathlet_ids": list(self.pathlet_ids),
            "cost": self.cost,
            "covered": self.covered,
        }


@dataclass(frozen=True)
class RepresentationVector:
    """Sparse binary representation of a trajectory over the unified dictionary."""

    traj_id: int
    active_ids: Tuple[int, ...]
    uncovered_edges: Tuple[int, ...] = ()

    @property
    def covered(self) -> bool:
        return not self.uncovered_edges

    def to_dict(self) -> Dict[str, Any]:
        return {
            "traj_id": self.traj_id,
            "active_ids": list(self.active_ids),
            "uncovered_edges": list(self.uncovered_edges),
            "covered": self.covered,
        }


@dataclass(frozen=True)
class BaselineResult:
    """Per-trajectory weighted decompositions and the dictionary they use together."""

    assignments: Dict[int, Tuple[int, ...]]
    objective: float
    dictionary: Any  # Dictionary

    def to_dict(self) -> Dict[str, Any]:
        return {
            "objective": self.objective,
            "dictionary_size": self.dictionary.size,
            "assignments": {str(k): list(v) for k, v in sorted(self.assignments.items())},
        }

"""
Trajectory and pathlet data models for PathletDecomposer.

This module contains the immutable data classes for trajectories, pathlets,
candidate sets and learned dictionaries.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from ..errors import ConfigError

EdgeSeq = Tuple[int, ...]


@dataclass(frozen=True)
class Trajectory:
    """A map-matched trajectory: an ordered sequence of contiguous edge ids."""

    traj_id: int
    edge_seq: EdgeSeq
    source_id: Optional[int] = None
    departure: Optional[Tuple[int, int]] = None  # (hours, minutes)

    def __post_init__(self):
        object.__setattr__(self, "edge_seq", tuple(int(e) for e in self.edge_seq))

    def __len__(self) -> int:
        return len(self.edge_seq)

    @property
    def origin_id(self) -> int:
        """Id of the input record this trajectory was read from."""
        return self.traj_id if self.source_id is None else self.source_id

    @property
    def is_split_part(self) -> bool:
        """Check if this trajectory is a piece of a longer input trajectory."""
        return self.source_id is not None and self.source_id != self.traj_id


@dataclass(frozen=True)
class Pathlet:
    """
    A contiguous subpath used as a dictionary element.

    For pathlets above the finest level, ``children`` holds the ids of the finer-level
    pathlets it concatenates and ``edge_seq`` holds the full expansion to edges.
    """

    pathlet_id: int
    edge_seq: EdgeSeq
    level: int = 0
    support: int = 0
    cell: Optional[int] = None
    children: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "edge_seq", tuple(int(e) for e in self.edge_seq))
        if self.children is not None:
            object.__setattr__(self, "children", tuple(int(c) for c in self.children))

    def __len__(self) -> int:
        return len(self.edge_seq)

    @property
    def is_super_pathlet(self) -> bool:
        """Check if this pathlet is composed of finer-level pathlets."""
        return self.children is not None


@dataclass(frozen=True)
class DictionaryOrigin:
    """Provenance of a learned dictionary."""

    lambda_: Optional[float] = None
    theta: Optional[float] = None
    seed: Optional[int] = None
    level: int = 0
    cell_id: Optional[int] = None
    method: str = "relaxation"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda": self.lambda_,
            "theta": self.theta,
            "seed": self.seed,
            "level": self.level,
            "cell_id": self.cell_id,
            "method": self.method,
        }


@dataclass(frozen=True)
class Dictionary:
    """A pathlet dictionary. Its size is the number of pathlets it holds."""

    pathlets: Tuple[Pathlet, ...]
    origin: DictionaryOrigin = field(default_factory=DictionaryOrigin)

    def __post_init__(self):
        object.__setattr__(self, "pathlets", tuple(self.pathlets))
        seen = set()
        for pathlet in self.pathlets:
            if pathlet.edge_seq in seen:
                raise ConfigError(f"Dictionary contains edge sequence {list(pathlet.edge_seq)} twice")
            seen.add(pathlet.edge_seq)

    def __len__(self) -> int:
        return len(self.pathlets)

    def __iter__(self) -> Iterator[Pathlet]:
        return iter(self.pathlets)

    @property
    def size(self) -> int:
        """Number of pathlets in the dictionary."""
        return len(self.pathlets)

    @cached_property
    def by_id(self) -> Dict[int, Pathlet]:
        return {p.pathlet_id: p for p in self.pathlets}

    def columns(self) -> List[Tuple[int, EdgeSeq]]:
        """(id, edge sequence) pairs used by the decomposer."""
        return [(p.pathlet_id, p.edge_seq) for p in self.pathlets]

    def subset(self, pathlet_ids: Sequence[int]) -> "Dictionary":
        """Return a dictionary restricted to the given pathlet ids, in dictionary order."""
        keep = set(pathlet_ids)
        return Dictionary(tuple(p for p in self.pathlets if p.pathlet_id in keep), self.origin)

    def total_edges(self) -> int:
        """Sum of pathlet lengths."""
        return sum(len(p) for p in self.pathlets)


@dataclass(frozen=True)
class CandidateSet:
    """
    Deduplicated candidate pathlets with their trajectory support.

    Candidate ``i`` is column ``i`` of the pathlet matrix D; pathlet ids equal positions.
    """

    pathlets: Tuple[Pathlet, ...]
    max_len: int
    c_min: int
    n_before_filter: int = 0

    def __len__(self) -> int:
        return len(self.pathlets)

    @property
    def support(self) -> List[int]:
        return [p.support for p in self.pathlets]

    @property
    def sequences(self) -> List[EdgeSeq]:
        return [p.edge_seq for p in self.pathlets]

    @cached_property
    def index(self) -> Dict[EdgeSeq, int]:
        """Edge sequence -> candidate position."""
        return {p.edge_seq: i for i, p in enumerate(self.pathlets)}

    def singleton(self, edge_id: int) -> Optional[int]:
        """Position of the length-1 candidate for ``edge_id``, if present."""
        return self.index.get((edge_id,))

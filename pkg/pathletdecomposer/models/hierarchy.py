"""
Multi-scale dictionary data models for PathletDecomposer.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

from .pathlet import Dictionary, EdgeSeq, Pathlet
from .solution import BinarySolution, FractionalSolution


@dataclass(frozen=True)
class UnifiedColumn:
    """One column of the unified dictionary P' with its provenance."""

    column: int
    level: int
    pathlet_id: int
    edge_seq: EdgeSeq
    cell: Optional[int] = None
    support: int = 0
    children: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class MultiScaleDictionary:
    """
    Per-level dictionaries plus their column concatenation P'.

    Columns are ordered level-major (coarsest level first) and then by pathlet id.
    Identical expansions at different levels keep separate columns.
    """

    levels: Dict[int, Dictionary]
    columns: Tuple[UnifiedColumn, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.columns)

    @property
    def size(self) -> int:
        """Number of columns of P'."""
        return len(self.columns)

    @property
    def level_numbers(self) -> List[int]:
        return sorted(self.levels)

    @property
    def finest_level(self) -> int:
        return max(self.levels)

    @property
    def level_sizes(self) -> Dict[int, int]:
        return {k: self.levels[k].size for k in self.level_numbers}

    @cached_property
    def column_of(self) -> Dict[Tuple[int, int], int]:
        """(level, pathlet_id) -> column index."""
        return {(c.level, c.pathlet_id): c.column for c in self.columns}

    def pathlet(self, level: int, pathlet_id: int) -> Pathlet:
        return self.levels[level].by_id[pathlet_id]

    def column_pairs(self) -> List[Tuple[int, EdgeSeq]]:
        """(column, expanded edge sequence) pairs used by the decomposer."""
        return [(c.column, c.edge_seq) for c in self.columns]


@dataclass
class CellResult:
    """Outcome of learning one cell: candidates, relaxed solve, rounding and dictionary."""

    cell_id: Optional[int]
    level: int
    dictionary: Dictionary
    n_sequences: int
    n_short: int
    n_candidates: int
    n_before_filter: int
    fractional: Optional[FractionalSolution] = None
    binary: Optional[BinarySolution] = None
    theta: Optional[float] = None
    n_patched: int = 0

    @property
    def converged(self) -> bool:
        return self.fractional is None or self.fractional.converged

    @property
    def repaired(self) -> bool:
        return self.binary is not None and self.binary.repaired

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cell_id": self.cell_id,
            "level": self.level,
            "dictionary_size": self.dictionary.size,
            "n_sequences": self.n_sequences,
            "n_short": self.n_short,
            "n_candidates": self.n_candidates,
            "n_before_filter": self.n_before_filter,
            "converged": self.converged,
            "repaired": self.repaired,
            "theta": self.theta,
            "iterations": self.fractional.iterations if self.fractional is not None else 0,
            "residual": self.fractional.residual if self.fractional is not None else 0.0,
            "smoothing_gap_bound": self.fractional.smoothing_gap_bound if self.fractional is not None else 0.0,
            "attempts_used": self.binary.attempts_used if self.binary is not None else 0,
            "n_patched": self.n_patched,
            "rounding_cost": self.binary.cost if self.binary is not None else 0.0,
        }


@dataclass
class LevelResult:
    """Union of the per-cell dictionaries of one level."""

    level: int
    dictionary: Dictionary
    cells: List[CellResult] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return all(c.converged for c in self.cells)

    @property
    def repaired(self) -> bool:
        return any(c.repaired for c in self.cells)

    @property
    def not_converged_cells(self) -> List[Optional[int]]:
        return [c.cell_id for c in self.cells if not c.converged]

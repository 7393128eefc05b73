"""
Axis-aligned binary space partition of a road graph.

Cells use heap numbering: the root is cell 1 and cell ``c`` has children ``2c`` and
``2c + 1``. The level of a cell is its depth, so level ``k`` holds cells
``2**k .. 2**(k + 1) - 1``. Splits alternate between x (even depth) and y (odd depth).
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import ConfigError, MissingGeometry
from .road_graph import RoadGraph

logger = logging.getLogger(__name__)

Box = Tuple[float, float, float, float]  # xmin, ymin, xmax, ymax


@dataclass(frozen=True)
class Split:
    axis: int  # 0 = x, 1 = y
    value: float


class PartitionTree:
    """
    Binary space partition with leaves at ``depth``.

    Each internal cell is split at the median of the midpoints of the edges it contains.
    Midpoints equal to the split value go to the lower child. A cell without edges is
    split at the centre of its box.
    """

    def __init__(self, depth: int, boxes: Dict[int, Box], splits: Dict[int, Split], leaf_of: Tuple[int, ...]):
        self.depth = depth
        self.boxes = boxes
        self.splits = splits
        self.leaf_of = leaf_of

    @property
    def root_box(self) -> Box:
        return self.boxes[1]

    @staticmethod
    def level_of(cell: int) -> int:
        return cell.bit_length() - 1

    @staticmethod
    def parent(cell: int) -> int:
        return cell // 2

    @staticmethod
    def children(cell: int) -> Tuple[int, int]:
        return 2 * cell, 2 * cell + 1

    def cells_at_level(self, level: int) -> List[int]:
        if not 0 <= level <= self.depth:
            raise ConfigError(f"Level {level} outside [0, {self.depth}]")
        return list(range(2**level, 2 ** (level + 1)))

    def cell_of(self, edge_id: int, level: Optional[int] = None) -> int:
        """Cell containing ``edge_id`` at ``level`` (the leaf level by default)."""
        if level is None:
            level = self.depth
        if not 0 <= level <= self.depth:
            raise ConfigError(f"Level {level} outside [0, {self.depth}]")
        return self.leaf_of[edge_id] >> (self.depth - level)

    def edges_in(self, cell: int) -> List[int]:
        level = self.level_of(cell)
        return [e for e in range(len(self.leaf_of)) if self.cell_of(e, level) == cell]

    def leaf_populations(self) -> Dict[int, int]:
        counts = {cell: 0 for cell in self.cells_at_level(self.depth)}
        for leaf in self.leaf_of:
            counts[leaf] += 1
        return counts


def _split_box(box: Box, split: Split) -> Tuple[Box, Box]:
    xmin, ymin, xmax, ymax = box
    if split.axis == 0:
        return (xmin, ymin, split.value, ymax), (split.value, ymin, xmax, ymax)
    return (xmin, ymin, xmax, split.value), (xmin, split.value, xmax, ymax)


def build_partition(graph: RoadGraph, depth: int) -> PartitionTree:
    """
    Build the partition tree of a graph.

    Args:
        graph: Road graph whose edges all have geometry
        depth: Depth of the leaves (at least 1)

    Returns:
        Deterministic PartitionTree

    Raises:
        MissingGeometry: If the graph has no edge geometry
        ConfigError: If depth < 1
    """
    if depth < 1:
        raise ConfigError(f"Partition depth must be at least 1, got {depth}")
    if not graph.has_geometry:
        raise MissingGeometry("Spatial partitioning requires edge geometry")

    midpoints = np.array([graph.midpoint(e) for e in range(graph.n_edges)], dtype=np.float64)
    boxes: Dict[int, Box] = {1: graph.bounding_box()}
    splits: Dict[int, Split] = {}
    members: Dict[int, np.ndarray] = {1: np.arange(graph.n_edges)}

    for level in range(depth):
        axis = level % 2
        for cell in range(2**level, 2 ** (level + 1)):
            box = boxes[cell]
            inside = members.pop(cell)
            if len(inside):
                value = float(np.median(midpoints[inside, axis]))
            else:
                value = (box[axis] + box[axis + 2]) / 2.0
            split = Split(axis, value)
            splits[cell] = split
            lower, upper = PartitionTree.children(cell)
            boxes[lower], boxes[upper] = _split_box(box, split)
            goes_lower = midpoints[inside, axis] <= value
            members[lower] = inside[goes_lower]
            members[upper] = inside[~goes_lower]

    leaf_of = [0] * graph.n_edges
    for cell, inside in members.items():
        for edge_id in inside.tolist():
            leaf_of[edge_id] = cell

    tree = PartitionTree(depth, boxes, splits, tuple(leaf_of))
    logger.info(f"Built partition of depth {depth} with leaf populations {tree.leaf_populations()}")
    return tree

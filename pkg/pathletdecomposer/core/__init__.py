from .partition_tree import PartitionTree, build_partition
from .road_graph import Edge, RoadGraph, load_graph, write_graph_csv
from .sparse_matrix import SparseBinaryMatrix
from .trajectory_loader import (
    load_trajectories,
    parse_trajectories,
    revisit_split_summary,
    split_at_revisits,
    write_trajectories_jsonl,
)

__all__ = [
    "Edge",
    "RoadGraph",
    "load_graph",
    "write_graph_csv",
    "load_trajectories",
    "parse_trajectories",
    "split_at_revisits",
    "revisit_split_summary",
    "write_trajectories_jsonl",
    "SparseBinaryMatrix",
    "PartitionTree",
    "build_partition",
]

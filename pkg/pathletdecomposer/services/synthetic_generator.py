"""
Synthetic Corpus Generator for PathletDecomposer.

Builds a grid road network and samples trajectories that follow a few shared corridors,
optionally with short random detours before and after. The corridor list is kept as
ground truth for recovery checks.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from ..core import Edge, RoadGraph, write_graph_csv, write_trajectories_jsonl
from ..errors import ConfigError
from ..models import EdgeSeq, Trajectory
from .export_service import ExportService

logger = logging.getLogger(__name__)

DEFAULT_SPACING = 100.0
CORRIDOR_LENGTH = (8, 12)
DETOUR_LENGTH = (1, 3)
MAX_WALK_ATTEMPTS = 1000


@dataclass
class SyntheticCorpus:
    """A generated graph, its trajectories and the corridors they were drawn from."""

    graph: RoadGraph
    trajectories: List[Trajectory]
    corridors: List[EdgeSeq]
    params: Dict[str, Any] = field(default_factory=dict)

    def ground_truth(self) -> Dict[str, Any]:
        return {"corridors": [list(c) for c in self.corridors], **self.params}


def grid_graph(grid_size: int, spacing: float = DEFAULT_SPACING) -> RoadGraph:
    """
    Directed ``grid_size`` x ``grid_size`` grid with both directions on every street.

    Node ``r * grid_size + c`` sits at ``(c * spacing, r * spacing)``. The graph has
    ``4 * n * (n - 1)`` edges.
    """
    if grid_size < 2:
        raise ConfigError(f"grid_size must be at least 2, got {grid_size}")

    def position(node: int) -> Tuple[float, float]:
        row, col = divmod(node, grid_size)
        return (col * spacing, row * spacing)

    edges: List[Edge] = []
    for node in range(grid_size * grid_size):
        row, col = divmod(node, grid_size)
        neighbours = []
        if col + 1 < grid_size:
            neighbours.append(node + 1)
        if row + 1 < grid_size:
            neighbours.append(node + grid_size)
        if col > 0:
            neighbours.append(node - 1)
        if row > 0:
            neighbours.append(node - grid_size)
        for other in neighbours:
            edges.append(Edge(len(edges), node, other, (position(node), position(other))))
    return RoadGraph(edges)


class SyntheticGenerator:
    """
    Samples corridor corpora on a grid graph.

    All randomness comes from one ``numpy.random.Generator`` seeded with ``seed``, so equal
    parameters give identical corpora.
    """

    def __init__(self, grid_size: int, seed: int, spacing: float = DEFAULT_SPACING):
        """
        Initialize the SyntheticGenerator.

        Args:
            grid_size: Number of nodes per side of the grid
            seed: Random seed
            spacing: Distance between neighbouring nodes in meters
        """
        if seed is None:
            raise ConfigError("A seed is required to generate a synthetic corpus")
        self.grid_size = grid_size
        self.seed = seed
        self.graph = grid_graph(grid_size, spacing)
        self.rng = np.random.default_rng(seed)
        self._in_edges: Dict[int, List[int]] = {}
        for edge in self.graph.edges:
            self._in_edges.setdefault(edge.to_node, []).append(edge.edge_id)

        logger.info(f"SyntheticGenerator initialized on a {grid_size}x{grid_size} grid")

    def _choose(self, options: Sequence[int]) -> int:
        return options[int(self.rng.integers(len(options)))]

    def _walk(self, length: int) -> Optional[EdgeSeq]:
        """One random simple walk of exactly ``length`` edges, or None if it got stuck."""
        node = int(self.rng.integers(self.grid_size * self.grid_size))
        visited = {node}
        path: List[int] = []
        for _ in range(length):
            options = [e for e in self.graph.out_edges[node] if self.graph.edge(e).to_node not in visited]
            if not options:
                return None
            edge_id = self._choose(options)
            node = self.graph.edge(edge_id).to_node
            visited.add(node)
            path.append(edge_id)
        return tuple(path)

    def corridor(self, min_len: int = CORRIDOR_LENGTH[0], max_len: int = CORRIDOR_LENGTH[1]) -> EdgeSeq:
        """
        Sample one corridor: a simple walk of ``min_len`` to ``max_len`` edges.

        Lengths are capped at the number of grid nodes minus one.
        """
        cap = self.grid_size * self.grid_size - 1
        low, high = min(min_len, cap), min(max_len, cap)
        for _ in range(MAX_WALK_ATTEMPTS):
            walk = self._walk(int(self.rng.integers(low, high + 1)))
            if walk is not None:
                return walk
        raise ConfigError(f"Could not sample a corridor of {low}-{high} edges on a {self.grid_size} grid")

    def _extend(self, path: List[int], visited: Set[int], forward: bool) -> None:
        """Add a random detour of 1 to 3 edges after (forward) or before the path."""
        steps = int(self.rng.integers(DETOUR_LENGTH[0], DETOUR_LENGTH[1] + 1))
        for _ in range(steps):
            if forward:
                node = self.graph.edge(path[-1]).to_node
                options = [e for e in self.graph.out_edges[node] if self.graph.edge(e).to_node not in visited]
            else:
                node = self.graph.edge(path[0]).from_node
                options = [e for e in self._in_edges[node] if self.graph.edge(e).from_node not in visited]
            if not options:
                return
            edge_id = self._choose(options)
            if forward:
                visited.add(self.graph.edge(edge_id).to_node)
                path.append(edge_id)
            else:
                visited.add(self.graph.edge(edge_id).from_node)
                path.insert(0, edge_id)

    def trajectory(self, traj_id: int, corridor: EdgeSeq, noise: float) -> Trajectory:
        """
        One trajectory along ``corridor``.

        With probability ``noise`` a prefix walk is added, and independently with
        probability ``noise`` a suffix walk. Detours never revisit a node.
        """
        path = list(corridor)
        visited = {self.graph.edge(path[0]).from_node} | {self.graph.edge(e).to_node for e in path}
        if self.rng.random() < noise:
            self._extend(path, visited, forward=False)
        if self.rng.random() < noise:
            self._extend(path, visited, forward=True)
        return Trajectory(traj_id, tuple(path))

    def generate(self, n_corridors: int, n_trajs: int, noise: float = 0.0) -> SyntheticCorpus:
        """
        Sample ``n_corridors`` corridors and ``n_trajs`` trajectories over them.

        Args:
            n_corridors: Number of distinct corridors
            n_trajs: Number of trajectories
            noise: Probability of each of the prefix and suffix detours

        Returns:
            SyntheticCorpus with the graph, trajectories and ground-truth corridors
        """
        if n_corridors < 1 or n_trajs < 0:
            raise ConfigError("n_corridors must be >= 1 and n_trajs >= 0")
        if not 0.0 <= noise <= 1.0:
            raise ConfigError(f"noise must be in [0, 1], got {noise}")

        corridors: List[EdgeSeq] = []
        for _ in range(MAX_WALK_ATTEMPTS):
            if len(corridors) == n_corridors:
                break
            candidate = self.corridor()
            if candidate not in corridors:
                corridors.append(candidate)
        if len(corridors) < n_corridors:
            raise ConfigError(f"Could not sample {n_corridors} distinct corridors")

        trajectories = [
            self.trajectory(traj_id, corridors[int(self.rng.integers(n_corridors))], noise)
            for traj_id in range(n_trajs)
        ]
        logger.info(f"Generated {n_trajs} trajectories over {n_corridors} corridors")
        params = {
            "grid_size": self.grid_size,
            "n_corridors": n_corridors,
            "n_trajs": n_trajs,
            "noise": noise,
            "seed": self.seed,
        }
        return SyntheticCorpus(self.graph, trajectories, corridors, params)


def generate_synthetic(
    grid_size: int, n_corridors: int, n_trajs: int, noise: float = 0.0, seed: int = 0
) -> SyntheticCorpus:
    """Convenience wrapper around SyntheticGenerator.generate."""
    return SyntheticGenerator(grid_size, seed).generate(n_corridors, n_trajs, noise)


def write_synthetic(corpus: SyntheticCorpus, output_dir: Union[str, Path]) -> Dict[str, str]:
    """
    Write ``graph.csv``, ``trajectories.jsonl`` and ``ground_truth.json``.

    Returns:
        Artifact name -> path
    """
    exporter = ExportService(output_dir)
    files = {
        "graph": write_graph_csv(corpus.graph, exporter.path_for("graph.csv")),
        "trajectories": write_trajectories_jsonl(corpus.trajectories, exporter.path_for("trajectories.jsonl")),
        "ground_truth": exporter.write_json("ground_truth", "ground_truth.json", corpus.ground_truth()),
    }
    logger.info(f"Wrote synthetic corpus to {output_dir}")
    return files

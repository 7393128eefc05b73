"""
Shared fixtures for the PathletDecomposer test suite.
"""

import itertools
import tempfile
from typing import List, Sequence, Tuple

import pytest

from pathletdecomposer.analyzers import enumerate_candidates
from pathletdecomposer.analyzers.decomposer import PathletIndex
from pathletdecomposer.core import Edge, RoadGraph
from pathletdecomposer.models import Dictionary, Pathlet, Trajectory


def chain_graph(n_edges: int, with_geometry: bool = True) -> RoadGraph:
    """Straight line of ``n_edges`` edges: edge ``i`` runs from node ``i`` to node ``i + 1``."""
    edges = []
    for i in range(n_edges):
        geometry = ((float(i), 0.0), (float(i + 1), 0.0)) if with_geometry else None
        edges.append(Edge(i, i, i + 1, geometry))
    return RoadGraph(edges)


def make_trajectories(sequences: Sequence[Sequence[int]], start_id: int = 0) -> List[Trajectory]:
    return [Trajectory(start_id + i, tuple(seq)) for i, seq in enumerate(sequences)]


def make_dictionary(sequences: Sequence[Sequence[int]], level: int = 0) -> Dictionary:
    return Dictionary(tuple(Pathlet(i, tuple(seq), level=level) for i, seq in enumerate(sequences)))


def corridor_sequences() -> List[Tuple[int, ...]]:
    """Twelve trajectories on a 12-edge chain sharing two corridors, with short overhangs."""
    return [
        (0, 1, 2, 3, 4),
        (0, 1, 2, 3, 4),
        (0, 1, 2, 3, 4),
        (0, 1, 2, 3, 4, 5),
        (0, 1, 2, 3, 4),
        (1, 2, 3, 4),
        (6, 7, 8, 9, 10),
        (6, 7, 8, 9, 10),
        (6, 7, 8, 9, 10),
        (6, 7, 8, 9, 10, 11),
        (6, 7, 8, 9, 10),
        (5, 6, 7, 8, 9, 10),
    ]


def exhaustive_optimum(sequences, candidate_sequences, lambda_):
    """min over candidate subsets S of |S| + lambda * sum of rc(t, S), all trajectories tiled."""
    best = None
    for mask in itertools.product([False, True], repeat=len(candidate_sequences)):
        chosen = [(i, s) for i, (s, keep) in enumerate(zip(candidate_sequences, mask)) if keep]
        index = PathletIndex(chosen)
        total = 0
        for seq in sequences:
            ids, uncovered = index.segment(seq)
            if uncovered:
                break
            total += len(ids)
        else:
            cost = len(chosen) + lambda_ * total
            best = cost if best is None else min(best, cost)
    return best


def tiny_chain_instance(rng):
    """At most 4 trajectories on a 6-edge chain and at most 10 candidates, singletons included."""
    sequences = []
    for _ in range(int(rng.integers(1, 5))):
        start = int(rng.integers(0, 5))
        length = int(rng.integers(1, min(4, 6 - start) + 1))
        sequences.append(tuple(range(start, start + length)))
    singletons = sorted({(e,) for seq in sequences for e in seq})
    longer = sorted(
        {s for s in enumerate_candidates(make_trajectories(sequences), 4, 1).sequences if len(s) > 1}
    )
    rng.shuffle(longer)
    candidates = singletons + sorted(longer[: 10 - len(singletons)])
    return sequences, candidates


@pytest.fixture
def graph():
    """A 12-edge chain graph with geometry."""
    return chain_graph(12)


@pytest.fixture
def corridor_corpus():
    """Trajectories on the 12-edge chain that share two long corridors."""
    return make_trajectories(corridor_sequences())


@pytest.fixture
def temp_output_dir():
    """Create a temporary directory for test outputs."""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield temp_dir

"""
Unit tests for the synthetic corridor corpus generator.
"""

import json
from pathlib import Path

import pytest

from pathletdecomposer.core import load_graph, load_trajectories
from pathletdecomposer.errors import ConfigError
from pathletdecomposer.services import SyntheticGenerator, generate_synthetic, grid_graph, write_synthetic


def contains(sequence, part):
    n = len(part)
    return any(tuple(sequence[i : i + n]) == tuple(part) for i in range(len(sequence) - n + 1))


class TestGridGraph:
    """Test cases for grid_graph."""

    def test_edge_count(self):
        graph = grid_graph(10)
        assert graph.n_edges == 360
        assert graph.has_geometry

    def test_both_directions(self):
        graph = grid_graph(2, spacing=1.0)
        pairs = {(e.from_node, e.to_node) for e in graph.edges}
        assert pairs == {(0, 1), (0, 2), (1, 0), (1, 3), (2, 3), (2, 0), (3, 2), (3, 1)}
        assert graph.bounding_box() == (0.0, 0.0, 1.0, 1.0)

    def test_too_small(self):
        with pytest.raises(ConfigError):
            grid_graph(1)


class TestSyntheticGenerator:
    """Test cases for SyntheticGenerator."""

    @pytest.fixture
    def corpus(self):
        return generate_synthetic(6, 3, 60, noise=0.3, seed=5)

    def test_corridors(self, corpus):
        assert len(corpus.corridors) == 3
        assert len(set(corpus.corridors)) == 3
        for corridor in corpus.corridors:
            assert 8 <= len(corridor) <= 12
            assert corpus.graph.is_path(corridor)

    def test_trajectories_follow_a_corridor(self, corpus):
        assert [t.traj_id for t in corpus.trajectories] == list(range(60))
        for trajectory in corpus.trajectories:
            assert corpus.graph.is_path(trajectory.edge_seq)
            assert any(contains(trajectory.edge_seq, c) for c in corpus.corridors)
            nodes = [corpus.graph.edge(trajectory.edge_seq[0]).from_node]
            nodes += [corpus.graph.edge(e).to_node for e in trajectory.edge_seq]
            assert len(nodes) == len(set(nodes))

    def test_noise_free_trajectories_are_corridors(self):
        corpus = generate_synthetic(5, 2, 20, noise=0.0, seed=1)
        assert {t.edge_seq for t in corpus.trajectories} <= set(corpus.corridors)

    def test_deterministic(self, corpus):
        again = generate_synthetic(6, 3, 60, noise=0.3, seed=5)
        assert again.trajectories == corpus.trajectories
        assert again.corridors == corpus.corridors
        assert generate_synthetic(6, 3, 60, noise=0.3, seed=6).trajectories != corpus.trajectories

    def test_corridor_length_is_capped_on_tiny_grids(self):
        corridor = SyntheticGenerator(2, seed=0).corridor()
        assert len(corridor) == 3

    @pytest.mark.parametrize("n_corridors,n_trajs,noise", [(0, 5, 0.0), (1, -1, 0.0), (1, 5, 1.5)])
    def test_invalid_parameters(self, n_corridors, n_trajs, noise):
        with pytest.raises(ConfigError):
            SyntheticGenerator(4, seed=0).generate(n_corridors, n_trajs, noise)

    def test_requires_seed(self):
        with pytest.raises(ConfigError):
            SyntheticGenerator(4, seed=None)

    def test_write_synthetic(self, corpus, temp_output_dir):
        files = write_synthetic(corpus, temp_output_dir)

        assert sorted(files) == ["graph", "ground_truth", "trajectories"]
        graph = load_graph(files["graph"])
        assert graph.n_edges == corpus.graph.n_edges
        assert load_trajectories(files["trajectories"], graph) == corpus.trajectories
        truth = json.loads(Path(files["ground_truth"]).read_text())
        assert truth["corridors"] == [list(c) for c in corpus.corridors]
        assert truth["seed"] == 5

"""
End-to-end checks on synthetic corridor corpora.

These learn full dictionaries and take minutes; deselect them with ``-m "not slow"``.
"""

import pytest

from pathletdecomposer.analyzers import cover_ratio
from pathletdecomposer.analyzers.metrics import create_metric_analyzer
from pathletdecomposer.core import build_partition
from pathletdecomposer.models import LearningConfig
from pathletdecomposer.services import (
    HierarchicalLearner,
    generate_synthetic,
    lambda_sweep,
    learn_level,
    mdl_score,
    partial_reconstruction_curve,
    unify,
)

pytestmark = pytest.mark.slow


def count_inversions(values, increasing):
    """Adjacent pairs that break the expected trend."""
    pairs = zip(values, values[1:])
    if increasing:
        return sum(b < a - 1e-9 for a, b in pairs)
    return sum(b > a + 1e-9 for a, b in pairs)


def mean_cost(dictionary, trajectories):
    return create_metric_analyzer("representation_cost", trajectories).calculate(dictionary)["mean_representation_cost"]


@pytest.fixture(scope="module")
def corridor_corpus():
    return generate_synthetic(10, 3, 200, noise=0.3, seed=21)


@pytest.fixture(scope="module")
def flat_dictionary(corridor_corpus):
    config = LearningConfig(seed=21)
    return learn_level(corridor_corpus.trajectories, None, 0, config, corridor_corpus.graph.n_edges).dictionary


class TestLambdaTrend:
    def test_size_grows_and_cost_falls_with_lambda(self, corridor_corpus):
        table = lambda_sweep(
            corridor_corpus.trajectories,
            [0.01, 0.1, 1.0, 10.0],
            seeds=[0, 1, 2, 3, 4],
            config=LearningConfig(),
            n_edges=corridor_corpus.graph.n_edges,
        )

        assert table["trajectory_cover"].tolist() == [1.0] * 4
        assert count_inversions(table["dictionary_size"].tolist(), increasing=True) <= 1
        assert count_inversions(table["mean_representation_cost"].tolist(), increasing=False) <= 1


class TestHierarchyBenefit:
    @pytest.fixture(scope="class")
    def corpus(self):
        return generate_synthetic(8, 3, 120, noise=0.2, seed=4)

    def test_unified_dictionary_is_close_to_flat(self, corpus):
        trajectories = corpus.trajectories
        tree = build_partition(corpus.graph, depth=1)
        crossing = [t for t in trajectories if len({tree.cell_of(e) for e in t.edge_seq}) > 1]
        assert crossing

        config = LearningConfig(seed=4)
        learner = HierarchicalLearner(corpus.graph, config, depth=1, levels=2)
        unified = learner.learn(trajectories)
        leaf_only = unify({1: unified.levels[1]})
        flat = learn_level(trajectories, None, 0, config, corpus.graph.n_edges).dictionary

        assert cover_ratio(trajectories, unified) == (1.0, 1.0)
        hierarchical_cost = mean_cost(unified, trajectories)
        assert hierarchical_cost <= mean_cost(leaf_only, trajectories) + 1e-9
        assert hierarchical_cost <= 1.15 * mean_cost(flat, trajectories)


class TestCoverageAndCompression:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_train_cover_is_complete(self, seed):
        corpus = generate_synthetic(6, 2, 80, noise=0.4, seed=seed)
        config = LearningConfig(seed=seed)

        flat = learn_level(corpus.trajectories, None, 0, config, corpus.graph.n_edges).dictionary
        unified = HierarchicalLearner(corpus.graph, config, depth=2, levels=3).learn(corpus.trajectories)

        assert cover_ratio(corpus.trajectories, flat) == (1.0, 1.0)
        assert cover_ratio(corpus.trajectories, unified) == (1.0, 1.0)

    def test_learned_dictionary_compresses(self, corridor_corpus, flat_dictionary):
        assert mdl_score(flat_dictionary, corridor_corpus.trajectories, corridor_corpus.graph.n_edges) < 1.0

    def test_partial_reconstruction(self, corridor_corpus, flat_dictionary):
        curve = partial_reconstruction_curve(flat_dictionary, corridor_corpus.trajectories)

        assert curve["uncover_ratio"].is_monotonic_decreasing
        assert curve.loc[curve["keep_fraction"] == 0.5, "uncover_ratio"].item() <= 0.2
        assert curve["uncover_ratio"].iloc[-1] == 0.0

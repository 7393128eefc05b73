"""
Unit tests for the evaluation service: reports, MDL, sweeps, curves and time features.
"""

import math

import pandas as pd
import pytest

from conftest import corridor_sequences, make_dictionary, make_trajectories
from pathletdecomposer.errors import EmptyCorpus
from pathletdecomposer.models import LearningConfig, RepresentationVector, Trajectory
from pathletdecomposer.services import (
    evaluate,
    feature_frame,
    lambda_sweep,
    learn_level,
    mdl_score,
    partial_reconstruction_curve,
    time_encoding,
    time_encoding_cos,
)
from pathletdecomposer.services.evaluation_service import CURVE_COLUMNS, SWEEP_COLUMNS, usage_counts


@pytest.fixture
def corridor_dictionary():
    """Columns: 0 = (0..4), 1 = (6..10), 2 = (5,), 3 = (11,), 4 = (1, 2, 3, 4)."""
    return make_dictionary([(0, 1, 2, 3, 4), (6, 7, 8, 9, 10), (5,), (11,), (1, 2, 3, 4)])


class TestEvaluate:
    """Test cases for evaluate and mdl_score."""

    def test_reports_on_both_splits(self, corridor_corpus, corridor_dictionary):
        test = make_trajectories([(0, 1, 2, 3, 4), (2, 3)], start_id=100)

        train_report, test_report = evaluate(corridor_dictionary, corridor_corpus, test, 12, {"seed": 3})

        assert train_report.split == "train"
        assert train_report.fully_covered
        assert train_report.trajectory_cover == 1.0
        assert train_report.dictionary_size == 5
        assert train_report.dictionary_size_over_T == pytest.approx(5 / 12)
        assert train_report.mean_representation_cost == pytest.approx(15 / 12)
        assert test_report.split == "test"
        assert test_report.dictionary_size_over_T == pytest.approx(5 / 12)
        assert test_report.n_covered == 1
        assert test_report.edge_cover == pytest.approx(5 / 7)
        assert test_report.provenance == {"seed": 3}

    def test_mdl_without_edge_universe(self, corridor_corpus, corridor_dictionary):
        train_report, _ = evaluate(corridor_dictionary, corridor_corpus, [])
        assert train_report.mdl_score is None

    def test_mdl_below_one_on_shared_corridors(self):
        trajectories = make_trajectories([(0, 1, 2, 3, 4)] * 20)
        # 20 + 20 bits against 400
        assert mdl_score(make_dictionary([(0, 1, 2, 3, 4)]), trajectories, 12) == pytest.approx(0.1)

    def test_mdl_at_least_one_on_disjoint_edges(self):
        trajectories = make_trajectories([(e,) for e in range(12)])
        dictionary = make_dictionary([(e,) for e in range(12)])
        assert mdl_score(dictionary, trajectories, 12) >= 1.0

    def test_learned_dictionary_compresses_corridors(self):
        trajectories = make_trajectories(corridor_sequences() * 2)
        dictionary = learn_level(trajectories, None, 0, LearningConfig(c_min=1, seed=0), 12).dictionary
        assert mdl_score(dictionary, trajectories, 12) < 1.0

    def test_mdl_empty_corpus(self, corridor_dictionary):
        with pytest.raises(EmptyCorpus):
            mdl_score(corridor_dictionary, [], 12)


class TestPartialReconstruction:
    """Test cases for usage counts and the partial-reconstruction curve."""

    def test_usage_counts(self, corridor_corpus, corridor_dictionary):
        counts = usage_counts(corridor_dictionary, corridor_corpus)
        assert counts == {0: 5, 1: 6, 2: 2, 3: 1, 4: 1}

    def test_curve(self, corridor_corpus, corridor_dictionary):
        curve = partial_reconstruction_curve(corridor_dictionary, corridor_corpus, [0.0, 0.4, 0.5, 1.0])

        assert list(curve.columns) == CURVE_COLUMNS
        assert curve["n_pathlets"].tolist() == [0, 2, 3, 5]
        assert curve["uncover_ratio"].tolist() == pytest.approx([1.0, 7 / 62, 5 / 62, 0.0])
        assert curve["uncover_ratio"].is_monotonic_decreasing
        assert curve.loc[curve["keep_fraction"] == 0.5, "uncover_ratio"].item() <= 0.2
        assert curve["trajectory_cover"].iloc[-1] == 1.0
        assert curve["mean_cost"].iloc[0] == 0.0

    def test_invalid_fraction(self, corridor_corpus, corridor_dictionary):
        with pytest.raises(ValueError):
            partial_reconstruction_curve(corridor_dictionary, corridor_corpus, [1.5])


class TestLambdaSweep:
    """Test cases for lambda_sweep."""

    def test_averages_over_seeds(self, corridor_corpus, corridor_dictionary):
        calls = []

        def learn(trajectories, config):
            calls.append((config.solver.lambda_, config.seed))
            return corridor_dictionary

        frame = lambda_sweep(corridor_corpus, [0.1, 1.0], [0, 1], LearningConfig(), 12, learn_fn=learn)

        assert calls == [(0.1, 0), (0.1, 1), (1.0, 0), (1.0, 1)]
        assert list(frame.columns) == SWEEP_COLUMNS
        assert frame["n_seeds"].tolist() == [2, 2]
        assert frame["dictionary_size"].tolist() == [5, 5]
        assert frame["is_default"].tolist() == [True, False]
        assert frame["trajectory_cover"].tolist() == [1.0, 1.0]

    def test_empty_sweep(self, corridor_corpus):
        frame = lambda_sweep(corridor_corpus, [], [0], LearningConfig(), 12)
        assert isinstance(frame, pd.DataFrame)
        assert frame.empty


class TestTimeEncoding:
    """Test cases for the departure-time features."""

    def test_known_values(self):
        assert abs(time_encoding(0, 0)) <= 1e-12
        assert abs(time_encoding(6, 0) - 1.0) <= 1e-12
        assert abs(time_encoding(18, 0) + 1.0) <= 1e-12
        assert abs(time_encoding_cos(12, 0) + 1.0) <= 1e-12

    def test_sine_and_cosine_separate_times(self):
        a = (time_encoding(3, 0), time_encoding_cos(3, 0))
        b = (time_encoding(9, 0), time_encoding_cos(9, 0))
        assert a[0] == pytest.approx(b[0])
        assert not math.isclose(a[1], b[1])

    @pytest.mark.parametrize("hours,minutes", [(24, 0), (-1, 0), (12, 60)])
    def test_out_of_range(self, hours, minutes):
        with pytest.raises(ValueError):
            time_encoding(hours, minutes)

    def test_feature_frame(self):
        trajectories = [Trajectory(0, (0, 1), departure=(6, 0)), Trajectory(1, (2,))]
        vectors = [RepresentationVector(0, (3, 4)), RepresentationVector(1, (), (2,))]

        frame = feature_frame(vectors, trajectories, cosine=True)

        assert frame["active_ids"].tolist() == ["3 4", ""]
        assert frame["n_uncovered"].tolist() == [0, 1]
        assert frame.loc[0, "time_sin"] == pytest.approx(1.0)
        assert frame.loc[0, "time_cos"] == pytest.approx(0.0, abs=1e-12)
        assert pd.isna(frame.loc[1, "time_sin"])

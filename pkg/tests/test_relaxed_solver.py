"""
Unit tests for the relaxed projected-gradient solver.
"""

import numpy as np
import pytest
from scipy import sparse

from conftest import exhaustive_optimum, tiny_chain_instance
from pathletdecomposer.analyzers import build_cover_matrices, solve_relaxed
from pathletdecomposer.analyzers.relaxed_solver import (
    smoothing_gap_bound,
    stopping_tau,
    subset_mask,
    surrogate_objective_and_gradient,
    true_objective,
)
from pathletdecomposer.core import SparseBinaryMatrix
from pathletdecomposer.errors import ConfigError, ShapeMismatch
from pathletdecomposer.models import SmoothingMode, SolverConfig


def random_instance(rng, max_dim=15):
    n_edges, n_candidates, n_traj = (int(v) for v in rng.integers(2, max_dim + 1, size=3))
    M = sparse.csr_matrix((rng.random((n_edges, n_traj)) < 0.3).astype(float))
    D = sparse.csr_matrix((rng.random((n_edges, n_candidates)) < 0.3).astype(float))
    R = rng.uniform(0.05, 0.95, size=(n_candidates, n_traj))
    return M, D, R


def finite_difference_gradient(fn, R, h=1e-5):
    gradient = np.zeros_like(R)
    for index in np.ndindex(R.shape):
        step = np.zeros_like(R)
        step[index] = h
        gradient[index] = (fn(R + step) - fn(R - step)) / (2 * h)
    return gradient


class TestTrueObjective:
    def test_matches_direct_evaluation(self):
        rng = np.random.default_rng(0)
        R = rng.random((5, 5))
        expected = sum(max(row) for row in R.tolist()) + 0.1 * sum(sum(row) for row in R.tolist())

        assert true_objective(R, 0.1) == pytest.approx(expected, rel=1e-12)

    def test_empty(self):
        assert true_objective(np.zeros((0, 3)), 0.1) == 0.0


class TestSurrogate:
    """Test cases for the smooth surrogate and its gradient."""

    @pytest.mark.parametrize("smoothing", [SmoothingMode.SOFTMAX, SmoothingMode.PNORM])
    def test_gradient_matches_finite_differences(self, smoothing):
        for seed in range(20):
            rng = np.random.default_rng(seed)
            M, D, R = random_instance(rng)

            def value(X):
                return surrogate_objective_and_gradient(X, M, D, 0.1, 2.0, smoothing, 0.1, 4.0)[0]

            _, gradient = surrogate_objective_and_gradient(R, M, D, 0.1, 2.0, smoothing, 0.1, 4.0)
            numeric = finite_difference_gradient(value, R)
            error = np.linalg.norm(gradient - numeric) / max(np.linalg.norm(numeric), 1e-12)
            assert error <= 1e-4, f"seed {seed}: relative error {error:.2e}"

    def test_softmax_upper_bounds_row_max(self):
        rng = np.random.default_rng(1)
        M, D, R = random_instance(rng)
        value, _ = surrogate_objective_and_gradient(R, M, D, 0.1, 0.0, SmoothingMode.SOFTMAX, 0.05)

        assert value >= true_objective(R, 0.1)
        assert value <= true_objective(R, 0.1) + R.shape[0] * 0.05 * np.log(R.shape[1]) + 1e-9

    def test_shape_mismatch(self):
        M = np.ones((3, 2))
        D = np.ones((3, 4))
        with pytest.raises(ShapeMismatch):
            surrogate_objective_and_gradient(np.zeros((3, 2)), M, D, 0.1, 1.0)

    def test_subset_mask(self):
        M = SparseBinaryMatrix.from_dense(np.array([[1, 0], [1, 1], [0, 1]]))
        D = SparseBinaryMatrix.from_dense(np.array([[1, 0], [1, 1], [0, 1]]))
        assert subset_mask(M, D).tolist() == [[True, False], [False, True]]

    def test_smoothing_gap_bound(self):
        config = SolverConfig()
        assert smoothing_gap_bound(10, 4, config, 0.0125) == pytest.approx(10 * 0.0125 * np.log(4))
        assert smoothing_gap_bound(10, 0, config, 0.0125) == 0.0

    def test_stopping_tau_meets_gap_tolerance(self):
        config = SolverConfig()
        tau = stopping_tau(10, 4, config)

        assert tau < config.tau_min
        assert smoothing_gap_bound(10, 4, config, tau) <= config.gap_tol
        assert smoothing_gap_bound(10, 4, config, 2 * tau) > config.gap_tol

    def test_stopping_tau_stays_at_tau_min_when_gap_is_small(self):
        assert stopping_tau(3, 1, SolverConfig()) == pytest.approx(0.0125)

    def test_stopping_tau_respects_floor(self):
        config = SolverConfig(tau_floor=0.01)
        assert stopping_tau(1000, 100, config) == pytest.approx(0.0125)


class TestSolveRelaxed:
    """Test cases for solve_relaxed."""

    @pytest.fixture
    def single_trajectory(self):
        # trajectory [0, 1]; candidates [0], [1], [0, 1]
        M = SparseBinaryMatrix.from_dense(np.array([[1], [1]]))
        D = SparseBinaryMatrix.from_dense(np.array([[1, 0, 1], [0, 1, 1]]))
        return M, D

    def test_prefers_single_pathlet_cover(self, single_trajectory):
        M, D = single_trajectory
        solution = solve_relaxed(M, D, SolverConfig(lambda_=0.1))

        assert solution.converged
        assert solution.residual < 1e-3
        assert int(np.argmax(solution.R_star[:, 0])) == 2
        assert true_objective(solution.R_star, 0.1) <= 1.1 + 1e-3
        assert solution.final_tau == pytest.approx(0.0125)

    def test_summary_reports_smoothing_gap(self, single_trajectory):
        M, D = single_trajectory
        solution = solve_relaxed(M, D, SolverConfig(lambda_=0.1))
        summary = solution.to_dict()

        assert summary["smoothing_gap_bound"] == solution.smoothing_gap_bound
        assert summary["final_tau"] == solution.final_tau
        assert summary["true_objective"] == pytest.approx(true_objective(solution.R_star, 0.1))
        assert "R_star" not in summary

    def test_iterates_stay_in_box(self):
        rng = np.random.default_rng(5)
        sequences, candidates = tiny_chain_instance(rng)
        M, D = build_cover_matrices(sequences, candidates, 6)
        solution = solve_relaxed(M, D, SolverConfig(restrict_to_subpaths=False))

        assert solution.R_star.min() >= 0.0
        assert solution.R_star.max() <= 1.0
        assert len(solution.objective_trace) == solution.iterations + 1
        assert len(solution.residual_trace) == len(solution.surrogate_trace)

    def test_mask_zeroes_disallowed_entries(self, single_trajectory):
        M, D = single_trajectory
        mask = np.array([[True], [True], [False]])
        solution = solve_relaxed(M, D, SolverConfig(), mask)

        assert solution.R_star[2, 0] == 0.0
        assert solution.R_star[0, 0] > 0.9
        assert solution.R_star[1, 0] > 0.9

    def test_mask_shape_is_checked(self, single_trajectory):
        M, D = single_trajectory
        with pytest.raises(ShapeMismatch):
            solve_relaxed(M, D, SolverConfig(), np.ones((2, 1), dtype=bool))

    def test_max_iters_reports_not_converged(self, single_trajectory):
        M, D = single_trajectory
        solution = solve_relaxed(M, D, SolverConfig(max_iters=3))

        assert not solution.converged
        assert solution.not_converged
        assert solution.iterations == 3

    def test_empty_instance(self):
        M = SparseBinaryMatrix.zeros(4, 2)
        D = SparseBinaryMatrix.zeros(4, 0)
        solution = solve_relaxed(M, D)

        assert solution.converged
        assert solution.R_star.shape == (0, 2)

    def test_rows_must_agree(self):
        with pytest.raises(ShapeMismatch):
            solve_relaxed(SparseBinaryMatrix.zeros(3, 1), SparseBinaryMatrix.zeros(4, 1))

    def test_invalid_config(self, single_trajectory):
        M, D = single_trajectory
        with pytest.raises(ConfigError):
            solve_relaxed(M, D, SolverConfig(lambda_=0.0))

    @pytest.mark.slow
    def test_lower_bounds_integer_optimum_on_tiny_instances(self):
        for seed in range(10):
            rng = np.random.default_rng(100 + seed)
            sequences, candidates = tiny_chain_instance(rng)
            M, D = build_cover_matrices(sequences, candidates, 6)
            solution = solve_relaxed(M, D, SolverConfig(lambda_=0.1))
            optimum = exhaustive_optimum(sequences, candidates, 0.1)

            assert solution.smoothing_gap_bound <= 0.05, f"seed {seed}"
            assert true_objective(solution.R_star, 0.1) <= optimum + 0.05, f"seed {seed}"

"""
Relaxed dictionary selection by projected gradient descent.

The binary decision matrix R (candidates x trajectories) is relaxed to [0, 1]. The
row-max term of the cost is replaced by a smooth maximum and the cover constraint
DR = M by a quadratic penalty, giving the surrogate

    sum_i smoothmax(R_i) + lambda * sum(R) + mu * ||DR - M||_F^2

which is minimised from R = 0 with clipping after every step.
"""

import logging
import math
from typing import Optional, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.special import logsumexp, softmax

from ..core import SparseBinaryMatrix
from ..errors import ShapeMismatch
from ..models import FractionalSolution, SmoothingMode, SolverConfig

logger = logging.getLogger(__name__)

MatrixLike = Union[SparseBinaryMatrix, sparse.spmatrix, np.ndarray]

# Relative slack accepted when comparing surrogate values in the line search.
_LINE_SEARCH_SLACK = 1e-12
_MIN_ALPHA = 1e-12


def _as_csr(matrix: MatrixLike) -> sparse.csr_matrix:
    if isinstance(matrix, SparseBinaryMatrix):
        return matrix.csr.astype(np.float64)
    return sparse.csr_matrix(matrix, dtype=np.float64)


def _check_shapes(R: np.ndarray, M_shape: Tuple[int, int], D_shape: Tuple[int, int]) -> None:
    n_edges, n_candidates = D_shape
    if R.ndim != 2 or R.shape[0] != n_candidates or M_shape != (n_edges, R.shape[1]):
        raise ShapeMismatch(
            f"Expected D {D_shape}, R ({n_candidates}, T) and M ({n_edges}, T); got R {R.shape}, M {M_shape}"
        )


def true_objective(R: np.ndarray, lambda_: float) -> float:
    """Sum of row maxima plus lambda times the sum of all entries."""
    R = np.asarray(R, dtype=np.float64)
    if R.size == 0:
        return 0.0
    return float(R.max(axis=1).sum() + lambda_ * R.sum())


def smooth_max(R: np.ndarray, smoothing: SmoothingMode, tau: float, p_norm: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Row-wise smooth maximum and its gradient.

    Returns:
        (per-row values, gradient with the shape of R)
    """
    if R.shape[1] == 0:
        return np.zeros(R.shape[0]), np.zeros_like(R)
    if smoothing is SmoothingMode.SOFTMAX:
        scaled = R / tau
        return tau * logsumexp(scaled, axis=1), softmax(scaled, axis=1)

    magnitude = np.abs(R)
    norms = np.power(np.power(magnitude, p_norm).sum(axis=1), 1.0 / p_norm)
    gradient = np.zeros_like(R)
    nonzero = norms > 0
    ratio = magnitude[nonzero] / norms[nonzero, None]
    gradient[nonzero] = np.sign(R[nonzero]) * np.power(ratio, p_norm - 1.0)
    return norms, gradient


def surrogate_objective_and_gradient(
    R: np.ndarray,
    M: MatrixLike,
    D: MatrixLike,
    lambda_: float,
    mu: float,
    smoothing: SmoothingMode = SmoothingMode.SOFTMAX,
    tau: float = 0.05,
    p_norm: float = 8.0,
) -> Tuple[float, np.ndarray]:
    """
    Evaluate the smooth surrogate and its exact gradient.

    Args:
        R: Dense decision matrix, candidates x trajectories
        M: Edge x trajectory matrix
        D: Edge x candidate matrix
        lambda_: Weight of the representation cost
        mu: Constraint penalty weight
        smoothing: Smooth maximum used for the row-max term
        tau: Softmax temperature
        p_norm: Exponent of the p-norm smoothing

    Returns:
        (surrogate value, gradient matrix)

    Raises:
        ShapeMismatch: If the operands do not conform
    """
    R = np.asarray(R, dtype=np.float64)
    M_csr, D_csr = _as_csr(M), _as_csr(D)
    _check_shapes(R, M_csr.shape, D_csr.shape)

    row_values, row_gradient = smooth_max(R, smoothing, tau, p_norm)
    residual = D_csr @ R - M_csr.toarray()
    value = float(row_values.sum() + lambda_ * R.sum() + mu * np.sum(residual * residual))
    gradient = row_gradient + lambda_ + 2.0 * mu * (D_csr.T @ residual)
    return value, np.asarray(gradient)


def subset_mask(M: MatrixLike, D: MatrixLike) -> np.ndarray:
    """True where every edge of candidate p is also an edge of trajectory t."""
    M_csr, D_csr = _as_csr(M), _as_csr(D)
    overlap = (D_csr.T @ M_csr).toarray()
    lengths = np.asarray(D_csr.sum(axis=0)).ravel()
    return overlap >= lengths[:, None] - 0.5


def smoothing_gap_bound(n_rows: int, n_cols: int, config: SolverConfig, tau: float) -> float:
    """Upper bound on how far the smoothed row-max term exceeds the true one."""
    if n_cols == 0:
        return 0.0
    if config.smoothing is SmoothingMode.SOFTMAX:
        return n_rows * tau * math.log(n_cols)
    return n_rows * (n_cols ** (1.0 / config.p_norm) - 1.0)


def stopping_tau(n_rows: int, n_cols: int, config: SolverConfig) -> float:
    """
    Temperature the annealing ends at.

    Starts from ``tau_min`` and keeps halving while the smoothing gap bound exceeds
    ``gap_tol``, never going below ``tau_floor``.
    """
    tau = config.tau_min
    while smoothing_gap_bound(n_rows, n_cols, config, tau) > config.gap_tol and tau / 2.0 >= config.tau_floor:
        tau /= 2.0
    return tau


def solve_relaxed(
    M: MatrixLike, D: MatrixLike, config: Optional[SolverConfig] = None, mask: Optional[np.ndarray] = None
) -> FractionalSolution:
    """
    Minimise the relaxed problem by projected gradient descent.

    The step size halves whenever a step would increase the surrogate. While the iterate
    is infeasible the penalty weight doubles every ``mu_double_every`` iterations and on
    every plateau; on a feasible plateau the temperature halves down to ``stopping_tau``. The
    solve converges on a feasible plateau at that temperature, where the smoothing gap
    bound is within ``gap_tol`` unless ``tau_floor`` was reached first.

    Args:
        M: Edge x trajectory matrix
        D: Edge x candidate matrix
        config: Solver configuration
        mask: Optional boolean candidates x trajectories mask of allowed entries. When
            omitted and ``restrict_to_subpaths`` is set, entries are allowed where the
            candidate's edges are a subset of the trajectory's edges.

    Returns:
        FractionalSolution; ``converged`` is False when ``max_iters`` ran out first
    """
    config = (config or SolverConfig()).validate()
    M_csr, D_csr = _as_csr(M), _as_csr(D)
    n_edges, n_candidates = D_csr.shape
    n_traj = M_csr.shape[1]
    if M_csr.shape[0] != n_edges:
        raise ShapeMismatch(f"M has {M_csr.shape[0]} rows but D has {n_edges}")

    if n_candidates == 0 or n_traj == 0:
        logger.info("Empty instance, returning the zero solution")
        return FractionalSolution(
            R_star=np.zeros((n_candidates, n_traj)),
            objective_trace=[0.0],
            surrogate_trace=[0.0],
            residual_trace=[0.0],
            converged=True,
            final_mu=config.mu,
            final_tau=config.tau,
            config=config,
        )

    if mask is not None:
        if mask.shape != (n_candidates, n_traj):
            raise ShapeMismatch(f"Mask shape {mask.shape} does not match R ({n_candidates}, {n_traj})")
        upper = mask.astype(np.float64)
    elif config.restrict_to_subpaths:
        upper = subset_mask(M_csr, D_csr).astype(np.float64)
    else:
        upper = np.ones((n_candidates, n_traj))
    M_dense = M_csr.toarray()
    final_tau = stopping_tau(n_candidates, n_traj, config)
    if final_tau < config.tau_min:
        logger.info(f"Annealing to tau={final_tau:g} to keep the smoothing gap within {config.gap_tol:g}")

    def evaluate(R: np.ndarray, mu: float, tau: float) -> Tuple[float, np.ndarray]:
        return surrogate_objective_and_gradient(
            R, M_csr, D_csr, config.lambda_, mu, config.smoothing, tau, config.p_norm
        )

    def max_residual(R: np.ndarray) -> float:
        return float(np.max(np.abs(D_csr @ R - M_dense)))

    R = np.zeros((n_candidates, n_traj))
    alpha, mu, tau = config.alpha, config.mu, config.tau
    value, gradient = evaluate(R, mu, tau)
    objective_trace = [true_objective(R, config.lambda_)]
    surrogate_trace = [value]
    residual_trace = [max_residual(R)]
    converged = False
    iteration = 0

    for iteration in range(1, config.max_iters + 1):
        while True:
            candidate = np.clip(R - alpha * gradient, 0.0, upper)
            new_value, new_gradient = evaluate(candidate, mu, tau)
            if new_value <= value + _LINE_SEARCH_SLACK * abs(value) or alpha < _MIN_ALPHA:
                break
            alpha /= 2.0

        relative_change = abs(value - new_value) / max(abs(value), 1e-12)
        R, value, gradient = candidate, new_value, new_gradient
        residual = max_residual(R)
        objective_trace.append(true_objective(R, config.lambda_))
        surrogate_trace.append(value)
        residual_trace.append(residual)

        feasible = residual < config.feasibility_tol
        surrogate_changed = False
        if relative_change < config.epsilon:
            if feasible:
                if tau <= final_tau:
                    converged = True
                    break
                tau = max(tau / 2.0, final_tau)
                surrogate_changed = True
            elif mu < config.mu_max:
                mu = min(2.0 * mu, config.mu_max)
                surrogate_changed = True
            else:
                logger.warning(f"Penalty weight reached {config.mu_max} without feasibility")
                break
        if not feasible and iteration % config.mu_double_every == 0 and mu < config.mu_max:
            mu = min(2.0 * mu, config.mu_max)
            surrogate_changed = True
        if surrogate_changed:
            value, gradient = evaluate(R, mu, tau)

    final_residual = residual_trace[-1]
    if converged:
        logger.info(f"Solver converged after {iteration} iterations (residual {final_residual:.2e})")
    else:
        logger.warning(
            f"Solver did not converge after {iteration} iterations (residual {final_residual:.2e}, mu {mu:g})"
        )

    return FractionalSolution(
        R_star=R,
        objective_trace=objective_trace,
        surrogate_trace=surrogate_trace,
        residual_trace=residual_trace,
        converged=converged,
        iterations=iteration,
        residual=final_residual,
        final_mu=mu,
        final_tau=tau,
        smoothing_gap_bound=smoothing_gap_bound(n_candidates, n_traj, config, tau),
        config=config,
    )

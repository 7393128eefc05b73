"""
Randomized rounding of a fractional selection into a pathlet dictionary.
"""

import logging
import math
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..core import SparseBinaryMatrix
from ..errors import ConfigError, InfeasibleSolution, ShapeMismatch
from ..models import (
    BinarySolution,
    BoundReport,
    CandidateSet,
    Dictionary,
    DictionaryOrigin,
    FractionalSolution,
    ThetaMode,
)
from .relaxed_solver import true_objective

logger = logging.getLogger(__name__)

MIN_BOUND_SAMPLES = 1000

FractionalLike = Union[FractionalSolution, np.ndarray]


def _fractional_matrix(fractional: FractionalLike) -> np.ndarray:
    R = fractional.R_star if isinstance(fractional, FractionalSolution) else fractional
    return np.asarray(R, dtype=np.float64)


def resolve_theta(
    mode: Union[ThetaMode, str], n_trajectories: int, value: Optional[float] = None, floor: float = 0.0
) -> float:
    """
    Rounding scale for the given regime.

    Derived regimes are raised to ``floor`` when they fall below it (no floor by
    default; a floor of 1 keeps every entry with R* = 1). An explicit value is used as
    given.

    Raises:
        ConfigError: Unknown mode, or explicit mode without a positive value
    """
    try:
        mode = ThetaMode(mode)
    except ValueError:
        raise ConfigError(f"Unknown theta mode: {mode}")
    if mode is ThetaMode.EXPLICIT:
        if value is None or value <= 0:
            raise ConfigError("explicit theta mode requires a positive value")
        return float(value)
    two_t = 2 * max(n_trajectories, 1)
    theta = {
        ThetaMode.QUARTER_LN2T: 0.25 * math.log(two_t),
        ThetaMode.LN2T: math.log(two_t),
        ThetaMode.LN4T: math.log(2 * two_t),
    }[mode]
    return max(theta, floor)


def sample_binary(R_star: np.ndarray, theta: float, rng: np.random.Generator) -> np.ndarray:
    """One Bernoulli draw per entry with probability min(1, theta * R*)."""
    q = np.minimum(1.0, theta * R_star)
    return rng.random(R_star.shape) < q


def uncovered_entries(R_r: np.ndarray, M: SparseBinaryMatrix, D: SparseBinaryMatrix) -> np.ndarray:
    """(edge, trajectory) pairs of M not covered by any selected pathlet, shape (k, 2)."""
    covered = D.csr @ np.asarray(R_r, dtype=np.float64)
    coo = M.csr.tocoo()
    missing = covered[coo.row, coo.col] < 0.5
    return np.stack([coo.row[missing], coo.col[missing]], axis=1)


def covers(R_r: np.ndarray, M: SparseBinaryMatrix, D: SparseBinaryMatrix) -> bool:
    """Check DR >= M."""
    if D.n_cols != R_r.shape[0] or M.shape != (D.n_rows, R_r.shape[1]):
        raise ShapeMismatch(f"Cannot check cover with D {D.shape}, R {R_r.shape}, M {M.shape}")
    return len(uncovered_entries(R_r, M, D)) == 0


def good_event_threshold(theta: float, lambda_: float, relaxed_cost: float) -> float:
    return 2.0 * theta * (lambda_ + 1.0) / lambda_ * relaxed_cost


def randomized_round(
    fractional: FractionalLike,
    theta: float,
    seed: Optional[int] = None,
    M: Optional[SparseBinaryMatrix] = None,
    D: Optional[SparseBinaryMatrix] = None,
    lambda_: float = 0.1,
    rng: Optional[np.random.Generator] = None,
) -> BinarySolution:
    """
    Draw one binary matrix with entry probabilities min(1, theta * R*).

    Feasibility and the good event are only evaluated when M and D are given; otherwise
    both are reported as False.
    """
    if theta <= 0:
        raise ConfigError(f"theta must be positive, got {theta}")
    R_star = _fractional_matrix(fractional)
    rng = rng if rng is not None else np.random.default_rng(seed)
    R_r = sample_binary(R_star, theta, rng)
    cost = true_objective(R_r, lambda_)
    feasible = covers(R_r, M, D) if M is not None and D is not None else False
    good = feasible and cost <= good_event_threshold(theta, lambda_, true_objective(R_star, lambda_)) + 1e-9
    return BinarySolution(
        R_r=SparseBinaryMatrix.from_dense(R_r),
        feasible=feasible,
        cost=cost,
        attempts_used=1,
        seed=seed,
        theta=theta,
        good_event=good,
    )


def singleton_columns(D: SparseBinaryMatrix) -> Dict[int, int]:
    """Edge id -> column of D holding the length-1 pathlet on that edge."""
    lengths = D.col_sums()
    result: Dict[int, int] = {}
    for column in np.flatnonzero(lengths == 1).tolist():
        result.setdefault(int(D.col_indices(column)[0]), column)
    return result


def repair(R_r: np.ndarray, M: SparseBinaryMatrix, D: SparseBinaryMatrix) -> int:
    """
    Cover every uncovered (edge, trajectory) pair with its length-1 pathlet, in place.

    Returns:
        Number of entries switched on

    Raises:
        InfeasibleSolution: If an uncovered edge has no length-1 candidate
    """
    singletons = singleton_columns(D)
    added = 0
    for edge_id, traj in uncovered_entries(R_r, M, D).tolist():
        column = singletons.get(edge_id)
        if column is None:
            raise InfeasibleSolution(f"No length-1 candidate covers edge {edge_id}")
        if not R_r[column, traj]:
            R_r[column, traj] = True
            added += 1
    return added


def round_until_good(
    fractional: FractionalLike,
    theta: float,
    lambda_: float,
    M: SparseBinaryMatrix,
    D: SparseBinaryMatrix,
    max_attempts: int = 3,
    seed: Optional[int] = None,
) -> BinarySolution:
    """
    Sample until a draw covers M at bounded cost, repairing the draws otherwise.

    Attempt ``k`` uses the ``k``-th child of ``SeedSequence(seed)``. The first draw that
    covers M with cost at most ``2 * theta * (lambda + 1) / lambda * C(R*)`` is returned.
    If none qualifies, every draw is completed with length-1 pathlets and the one with
    the lowest cost after repair is returned (earliest on ties); ``repaired`` is set when
    its repair added any entry.

    Args:
        fractional: Relaxed solution R*
        theta: Rounding scale
        lambda_: Weight of the representation cost
        M: Edge x trajectory matrix
        D: Edge x candidate matrix
        max_attempts: Number of draws before falling back to repair
        seed: Base seed

    Returns:
        A feasible BinarySolution
    """
    if max_attempts < 1:
        raise ConfigError(f"max_attempts must be at least 1, got {max_attempts}")
    if theta <= 0:
        raise ConfigError(f"theta must be positive, got {theta}")
    R_star = _fractional_matrix(fractional)
    threshold = good_event_threshold(theta, lambda_, true_objective(R_star, lambda_))

    samples: List[np.ndarray] = []
    for attempt, child in enumerate(np.random.SeedSequence(seed).spawn(max_attempts), start=1):
        R_r = sample_binary(R_star, theta, np.random.default_rng(child))
        cost = true_objective(R_r, lambda_)
        if covers(R_r, M, D) and cost <= threshold + 1e-9:
            logger.info(f"Rounding accepted attempt {attempt} with cost {cost:.4f}")
            return BinarySolution(
                R_r=SparseBinaryMatrix.from_dense(R_r),
                feasible=True,
                cost=cost,
                attempts_used=attempt,
                seed=seed,
                theta=theta,
                good_event=True,
            )
        samples.append(R_r)

    repaired: List[Tuple[float, int, np.ndarray]] = []
    for R_r in samples:
        added = repair(R_r, M, D)
        repaired.append((true_objective(R_r, lambda_), added, R_r))
    best = min(range(len(repaired)), key=lambda k: repaired[k][0])
    cost, added, R_r = repaired[best]
    if added:
        logger.warning(f"No good rounding in {max_attempts} attempts; repair added {added} length-1 entries")
    return BinarySolution(
        R_r=SparseBinaryMatrix.from_dense(R_r),
        feasible=True,
        cost=cost,
        attempts_used=max_attempts,
        seed=seed,
        theta=theta,
        repaired=added > 0,
        good_event=False,
    )


def extract_dictionary(
    solution: Union[BinarySolution, SparseBinaryMatrix],
    candidates: CandidateSet,
    origin: Optional[DictionaryOrigin] = None,
) -> Dictionary:
    """
    Keep the candidates whose row of R^r contains a 1.

    Raises:
        InfeasibleSolution: If the solution is flagged as not covering M
        ShapeMismatch: If R^r and the candidate set disagree on the number of candidates
    """
    if isinstance(solution, BinarySolution):
        if not solution.feasible:
            raise InfeasibleSolution("Cannot extract a dictionary from an infeasible rounding")
        R_r = solution.R_r
    else:
        R_r = solution
    if R_r.n_rows != len(candidates):
        raise ShapeMismatch(f"R has {R_r.n_rows} rows but there are {len(candidates)} candidates")
    used = np.flatnonzero(R_r.row_sums() > 0).tolist()
    return Dictionary(tuple(candidates.pathlets[i] for i in used), origin or DictionaryOrigin())


def verify_bound(
    fractional: FractionalLike,
    theta: float,
    lambda_: float,
    M: SparseBinaryMatrix,
    D: SparseBinaryMatrix,
    n_samples: int = 10000,
    seed: Optional[int] = None,
    theta_regime: str = ThetaMode.EXPLICIT.value,
    theta_floored: bool = False,
) -> BoundReport:
    """
    Estimate the probability of the good event and compare it with 1/2 - |T| exp(-theta).

    The check passes when the estimate is at least the bound minus three binomial
    standard errors. A bound at or below zero is reported as vacuous.
    """
    if n_samples < MIN_BOUND_SAMPLES:
        raise ConfigError(f"n_samples must be at least {MIN_BOUND_SAMPLES}, got {n_samples}")
    R_star = _fractional_matrix(fractional)
    n_traj = R_star.shape[1]
    threshold = good_event_threshold(theta, lambda_, true_objective(R_star, lambda_))
    rng = np.random.default_rng(seed)

    hits = 0
    for _ in range(n_samples):
        R_r = sample_binary(R_star, theta, rng)
        if true_objective(R_r, lambda_) <= threshold + 1e-9 and covers(R_r, M, D):
            hits += 1

    empirical = hits / n_samples
    bound = 0.5 - n_traj * math.exp(-theta)
    vacuous = bound <= 1e-12
    sigma = math.sqrt(bound * (1.0 - bound) / n_samples) if 0 < bound < 1 else 0.0
    margin = 3.0 * sigma
    passed = empirical >= bound - margin
    if not passed:
        logger.warning(f"Good-event frequency {empirical:.4f} is below the bound {bound:.4f} - {margin:.4f}")

    return BoundReport(
        theta=theta,
        lambda_=lambda_,
        n_samples=n_samples,
        n_trajectories=n_traj,
        empirical_p=empirical,
        theoretical_lower_bound=bound,
        margin=margin,
        passed=passed,
        vacuous=vacuous,
        theta_regime=theta_regime,
        theta_floored=theta_floored,
    )

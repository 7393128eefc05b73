"""
Evaluation Service for PathletDecomposer.

This service computes dictionary quality reports on train and test splits, the MDL
score, the lambda sweep and partial-reconstruction tables, and the departure-time
features exported next to representation vectors.
"""

import logging
import math
from collections import Counter
from dataclasses import replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from ..analyzers.decomposer import DictionaryLike, PathletIndex
from ..analyzers.metrics import create_metric_analyzer
from ..errors import EmptyCorpus
from ..models import EvalReport, LearningConfig, RepresentationVector, Trajectory
from .hierarchy_learner import learn_level

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA = 0.1
SWEEP_COLUMNS = [
    "lambda",
    "n_seeds",
    "dictionary_size",
    "dictionary_size_over_T",
    "mean_representation_cost",
    "trajectory_cover",
    "mdl_score",
    "is_default",
]
CURVE_COLUMNS = ["keep_fraction", "n_pathlets", "uncover_ratio", "trajectory_cover", "mean_cost"]
DEFAULT_KEEP_FRACTIONS = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


def evaluate_split(
    dictionary: DictionaryLike,
    trajectories: Sequence[Trajectory],
    split: str,
    n_train: int,
    n_edges: Optional[int] = None,
    provenance: Optional[Dict[str, Any]] = None,
) -> EvalReport:
    """
    Report size, representation cost, cover ratios and MDL score on one split.

    ``dictionary_size_over_T`` is normalised by ``n_train``. The MDL score is None when
    it cannot be computed (empty split or unknown edge universe).
    """
    index = PathletIndex.of(dictionary)
    size = create_metric_analyzer("dictionary_size", trajectories, n_edges).calculate(index, n_reference=n_train)
    cost = create_metric_analyzer("representation_cost", trajectories, n_edges)
    cost_results = cost.calculate(index)
    cover = create_metric_analyzer("cover_ratio", trajectories, n_edges).calculate(index)

    mdl: Optional[float] = None
    if n_edges:
        try:
            mdl = create_metric_analyzer("mdl_score", trajectories, n_edges).calculate(index)["mdl_score"]
        except EmptyCorpus:
            mdl = None

    for recommendation in cost.get_recommendations(cost_results):
        logger.info(f"{split}: {recommendation}")

    return EvalReport(
        split=split,
        n_trajectories=len(trajectories),
        n_covered=cost_results["n_covered"],
        dictionary_size=size["dictionary_size"],
        dictionary_size_over_T=size["dictionary_size_over_T"],
        mean_representation_cost=cost_results["mean_representation_cost"],
        trajectory_cover=cover["trajectory_cover"],
        edge_cover=cover["edge_cover"],
        mdl_score=mdl,
        provenance=dict(provenance or {}),
    )


def evaluate(
    dictionary: DictionaryLike,
    train: Sequence[Trajectory],
    test: Sequence[Trajectory],
    n_edges: Optional[int] = None,
    provenance: Optional[Dict[str, Any]] = None,
) -> Tuple[EvalReport, EvalReport]:
    """
    Evaluate a dictionary learned on ``train`` on both splits.

    Args:
        dictionary: Learned dictionary (flat or unified)
        train: Training trajectories
        test: Held-out trajectories
        n_edges: Number of graph edges, for the MDL score
        provenance: Config hash, seed and similar values copied into both reports

    Returns:
        (train report, test report)
    """
    index = PathletIndex.of(dictionary)
    train_report = evaluate_split(index, train, "train", len(train), n_edges, provenance)
    test_report = evaluate_split(index, test, "test", len(train), n_edges, provenance)
    logger.info(
        f"Train cover {train_report.trajectory_cover:.3f}, cost {train_report.mean_representation_cost:.3f}; "
        f"test cover {test_report.trajectory_cover:.3f}, cost {test_report.mean_representation_cost:.3f}"
    )
    return train_report, test_report


def mdl_score(dictionary: DictionaryLike, trajectories: Sequence[Trajectory], n_edges: int) -> float:
    """
    Description length of corpus plus dictionary relative to the raw corpus.

    Raises:
        EmptyCorpus: If there are no trajectories or no edges
    """
    return create_metric_analyzer("mdl_score", trajectories, n_edges).calculate(dictionary)["mdl_score"]


def flat_learner(n_edges: int) -> Callable[[Sequence[Trajectory], LearningConfig], DictionaryLike]:
    """Learning function for sweeps: a single unpartitioned cell."""

    def learn(trajectories: Sequence[Trajectory], config: LearningConfig) -> DictionaryLike:
        return learn_level(trajectories, None, 0, config, n_edges).dictionary

    return learn


def lambda_sweep(
    trajectories: Sequence[Trajectory],
    lambdas: Sequence[float],
    seeds: Sequence[int],
    config: LearningConfig,
    n_edges: int,
    learn_fn: Optional[Callable[[Sequence[Trajectory], LearningConfig], DictionaryLike]] = None,
) -> pd.DataFrame:
    """
    Learn one dictionary per (lambda, seed) and average the metrics over seeds.

    Args:
        trajectories: Training corpus
        lambdas: Trade-off values to sweep
        seeds: Seeds averaged per lambda
        config: Base learning configuration; lambda and seed are replaced
        n_edges: Number of graph edges
        learn_fn: Learning function, flat learning by default

    Returns:
        DataFrame with one row per lambda and the SWEEP_COLUMNS headers
    """
    learn_fn = learn_fn or flat_learner(n_edges)
    rows = []
    for lambda_ in lambdas:
        per_seed = []
        for seed in seeds:
            run_config = replace(config, solver=replace(config.solver, lambda_=lambda_), seed=seed)
            dictionary = learn_fn(trajectories, run_config)
            report = evaluate_split(dictionary, trajectories, "train", len(trajectories), n_edges)
            per_seed.append(report)
            logger.info(
                f"lambda={lambda_:g} seed={seed}: size {report.dictionary_size}, "
                f"cost {report.mean_representation_cost:.3f}"
            )
        mdl_values = [r.mdl_score for r in per_seed if r.mdl_score is not None]
        rows.append(
            {
                "lambda": lambda_,
                "n_seeds": len(per_seed),
                "dictionary_size": sum(r.dictionary_size for r in per_seed) / len(per_seed),
                "dictionary_size_over_T": sum(r.dictionary_size_over_T for r in per_seed) / len(per_seed),
                "mean_representation_cost": sum(r.mean_representation_cost for r in per_seed) / len(per_seed),
                "trajectory_cover": sum(r.trajectory_cover for r in per_seed) / len(per_seed),
                "mdl_score": sum(mdl_values) / len(mdl_values) if mdl_values else None,
                "is_default": math.isclose(lambda_, DEFAULT_LAMBDA),
            }
        )
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def usage_counts(dictionary: DictionaryLike, trajectories: Sequence[Trajectory]) -> Counter:
    """How often each column is used when decomposing the corpus."""
    index = PathletIndex.of(dictionary)
    counts: Counter = Counter({column_id: 0 for column_id in index.columns})
    for trajectory in trajectories:
        ids, _ = index.segment(trajectory.edge_seq)
        counts.update(ids)
    return counts


def partial_reconstruction_curve(
    dictionary: DictionaryLike,
    trajectories: Sequence[Trajectory],
    keep_fractions: Sequence[float] = DEFAULT_KEEP_FRACTIONS,
) -> pd.DataFrame:
    """
    Reconstruct the corpus with only the most used pathlets.

    Pathlets are ranked by how often the full dictionary uses them on the corpus (ties
    by id); for each fraction ``f`` the top ``ceil(f * n)`` are kept.

    Returns:
        DataFrame with the CURVE_COLUMNS headers, one row per keep fraction
    """
    index = PathletIndex.of(dictionary)
    counts = usage_counts(index, trajectories)
    ranked = sorted(index.columns, key=lambda column_id: (-counts[column_id], column_id))
    total_edges = sum(len(t) for t in trajectories)

    rows = []
    for fraction in keep_fractions:
        if not 0.0 <= fraction <= 1.0:
            raise ValueError(f"keep fraction must be in [0, 1], got {fraction}")
        n_keep = math.ceil(fraction * len(ranked) - 1e-9)
        kept = PathletIndex([(c, index.columns[c]) for c in ranked[:n_keep]])
        uncovered = 0
        covered_costs: List[int] = []
        for trajectory in trajectories:
            ids, missing = kept.segment(trajectory.edge_seq)
            uncovered += len(missing)
            if not missing:
                covered_costs.append(len(ids))
        rows.append(
            {
                "keep_fraction": fraction,
                "n_pathlets": n_keep,
                "uncover_ratio": uncovered / total_edges if total_edges else 0.0,
                "trajectory_cover": len(covered_costs) / len(trajectories) if trajectories else 1.0,
                "mean_cost": sum(covered_costs) / len(covered_costs) if covered_costs else 0.0,
            }
        )
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def _check_time(hours: int, minutes: int) -> int:
    if not (0 <= hours <= 23 and 0 <= minutes <= 59):
        raise ValueError(f"Time out of range: {hours}:{minutes}")
    return hours * 60 + minutes


def time_encoding(hours: int, minutes: int) -> float:
    """sin(2 pi (60 h + m) / 1440): position of the departure time on a daily cycle."""
    return math.sin(2.0 * math.pi * _check_time(hours, minutes) / 1440.0)


def time_encoding_cos(hours: int, minutes: int) -> float:
    """Cosine companion of ``time_encoding`` so that times are uniquely identified."""
    return math.cos(2.0 * math.pi * _check_time(hours, minutes) / 1440.0)


def feature_frame(
    vectors: Sequence[RepresentationVector], trajectories: Sequence[Trajectory], cosine: bool = False
) -> pd.DataFrame:
    """
    Representation vectors with departure-time features, one row per trajectory.

    Trajectories without a departure time get empty time features.
    """
    departures = {t.traj_id: t.departure for t in trajectories}
    rows = []
    for vector in vectors:
        departure = departures.get(vector.traj_id)
        row: Dict[str, Any] = {
            "traj_id": vector.traj_id,
            "active_ids": " ".join(str(i) for i in vector.active_ids),
            "n_active": len(vector.active_ids),
            "n_uncovered": len(vector.uncovered_edges),
            "time_sin": time_encoding(*departure) if departure else None,
        }
        if cosine:
            row["time_cos"] = time_encoding_cos(*departure) if departure else None
        rows.append(row)
    columns = ["traj_id", "active_ids", "n_active", "n_uncovered", "time_sin"] + (["time_cos"] if cosine else [])
    return pd.DataFrame(rows, columns=columns)

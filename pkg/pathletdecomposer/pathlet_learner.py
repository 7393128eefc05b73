"""
PathletLearner module - facade over the learning services.
Coordinates candidate enumeration, relaxed solving, rounding, hierarchy and evaluation
for one training corpus.
"""

import logging
from typing import List, Optional, Sequence, Tuple, Union

from .analyzers import (
    baseline_per_trajectory,
    build_cover_matrices,
    build_usage_mask,
    decompose_all,
    encode_new,
    enumerate_candidates,
    resolve_theta,
    solve_relaxed,
    verify_bound,
)
from .core import RoadGraph, SparseBinaryMatrix
from .errors import EmptyCorpus
from .models import (
    BaselineResult,
    BoundReport,
    CandidateSet,
    Decomposition,
    Dictionary,
    EvalReport,
    FractionalSolution,
    LevelResult,
    MultiScaleDictionary,
    RepresentationVector,
    RunConfig,
    ThetaMode,
    Trajectory,
)
from .services.evaluation_service import evaluate
from .services.hierarchy_learner import ROOT_CELL, HierarchicalLearner, learn_level

logger = logging.getLogger(__name__)

LearnedDictionary = Union[Dictionary, MultiScaleDictionary]


class PathletLearner:
    """
    Learns a pathlet dictionary from a training corpus.

    With ``hierarchy_depth == 0`` the corpus is learned as one cell and the result is a
    flat Dictionary; otherwise a HierarchicalLearner builds a MultiScaleDictionary.
    """

    def __init__(self, graph: RoadGraph, config: RunConfig, randomized: bool = True):
        """
        Initialize PathletLearner.

        Args:
            graph: Road graph the trajectories live on
            config: Run configuration; validated here
            randomized: Whether a seed is required
        """
        self.graph = graph
        self.config = config.validate(randomized)
        self.learning_config = config.learning_config()
        self.dictionary: Optional[LearnedDictionary] = None
        self.level_results: List[LevelResult] = []
        self._hierarchy: Optional[HierarchicalLearner] = None

        logger.info(f"PathletLearner initialized (lambda={config.lambda_}, hierarchy_depth={config.hierarchy_depth})")

    @property
    def hierarchical(self) -> bool:
        return self.config.hierarchy_depth > 0

    def learn(self, trajectories: Sequence[Trajectory]) -> LearnedDictionary:
        """Learn the dictionary on ``trajectories``; per-level results land in ``level_results``."""
        if self.hierarchical:
            self._hierarchy = HierarchicalLearner(
                self.graph, self.learning_config, self.config.hierarchy_depth, self.config.hierarchy_levels
            )
            self.dictionary = self._hierarchy.learn(trajectories)
            self.level_results = list(self._hierarchy.level_results)
        else:
            result = learn_level(trajectories, None, 0, self.learning_config, self.graph.n_edges)
            self.level_results = [result]
            self.dictionary = result.dictionary
        logger.info(f"Learned dictionary with {len(self.dictionary)} pathlets")
        return self.dictionary

    def _require_dictionary(self) -> LearnedDictionary:
        if self.dictionary is None:
            raise RuntimeError("learn() must be called first")
        return self.dictionary

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.level_results)

    @property
    def repaired(self) -> bool:
        return any(r.repaired for r in self.level_results)

    @property
    def smoothing_gap_bound(self) -> float:
        """Largest bound on the surrogate-to-true objective gap over the solved cells."""
        return max(
            (c.fractional.smoothing_gap_bound for r in self.level_results for c in r.cells if c.fractional is not None),
            default=0.0,
        )

    @property
    def root_solution(self) -> Optional[FractionalSolution]:
        """Relaxed solution of the unpartitioned corpus, for flat runs."""
        if self.hierarchical or not self.level_results:
            return None
        cell = self.level_results[0].cells[0]
        return cell.fractional if cell.cell_id == ROOT_CELL else None

    # Candidates and matrices

    def _long(self, trajectories: Sequence[Trajectory]) -> List[Trajectory]:
        return [t for t in trajectories if len(t) >= self.config.min_traj_len]

    def candidates(self, trajectories: Sequence[Trajectory]) -> CandidateSet:
        """Frequency-filtered candidates of the trajectories long enough to be learned."""
        return enumerate_candidates(self._long(trajectories), self.config.max_len, self.config.c_min)

    def problem(
        self, trajectories: Sequence[Trajectory]
    ) -> Tuple[CandidateSet, SparseBinaryMatrix, SparseBinaryMatrix, List[Trajectory]]:
        """Candidates, M and D of the flat problem over the long trajectories."""
        long = self._long(trajectories)
        candidates = enumerate_candidates(long, self.config.max_len, self.config.c_min)
        M, D = build_cover_matrices([t.edge_seq for t in long], candidates.sequences, self.graph.n_edges)
        return candidates, M, D, long

    def baseline(self, trajectories: Sequence[Trajectory]) -> BaselineResult:
        """Per-trajectory weighted decompositions over the candidates of every trajectory."""
        candidates = enumerate_candidates(trajectories, self.config.max_len, self.config.c_min)
        return baseline_per_trajectory(trajectories, candidates, self.config.lambda_)

    # Evaluation

    def evaluate(
        self, train: Sequence[Trajectory], test: Sequence[Trajectory], provenance: Optional[dict] = None
    ) -> Tuple[EvalReport, EvalReport]:
        return evaluate(self._require_dictionary(), train, test, self.graph.n_edges, provenance)

    def decompose(self, trajectories: Sequence[Trajectory]) -> List[Decomposition]:
        return decompose_all(trajectories, self._require_dictionary())

    def encode(self, trajectories: Sequence[Trajectory], method: str = "exact") -> List[RepresentationVector]:
        dictionary = self._require_dictionary()
        return [
            encode_new(
                t,
                dictionary,
                method=method,
                solver_config=self.learning_config.solver,
                rounding_config=self.learning_config.rounding,
                seed=self.config.seed,
            )
            for t in trajectories
        ]

    def verify_bound(
        self,
        trajectories: Sequence[Trajectory],
        theta_mode: Optional[Union[ThetaMode, str]] = None,
        n_samples: int = 10000,
    ) -> BoundReport:
        """
        Monte-Carlo check of the rounding bound on the flat problem of ``trajectories``.

        The relaxed solution of a flat ``learn()`` on the same corpus is reused; otherwise
        the problem is solved here.
        """
        mode = ThetaMode(theta_mode or self.config.theta_mode)
        candidates, M, D, long = self.problem(trajectories)
        if not long:
            raise EmptyCorpus("No trajectory is long enough for the bound check")
        fractional = self.root_solution
        if fractional is None or fractional.shape != (len(candidates), len(long)):
            mask = None
            if self.learning_config.solver.restrict_to_subpaths:
                mask = build_usage_mask([t.edge_seq for t in long], candidates)
            fractional = solve_relaxed(M, D, self.learning_config.solver, mask)
        theta = resolve_theta(mode, len(long), self.config.theta_value, self.config.theta_floor)
        floored = theta > resolve_theta(mode, len(long), self.config.theta_value)
        report = verify_bound(
            fractional,
            theta,
            self.config.lambda_,
            M,
            D,
            n_samples,
            self.config.seed,
            theta_regime=mode.value,
            theta_floored=floored,
        )
        logger.info(
            f"Bound check ({mode.value}, theta={theta:.3f}): p={report.empirical_p:.4f}, "
            f"bound={report.theoretical_lower_bound:.4f}, pass={report.passed}"
        )
        return report

"""
Evaluation and run configuration data models for PathletDecomposer.

This module contains the evaluation report and the run configuration that drives
the command-line pipeline.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Optional

from ..errors import ConfigError
from .solution import LearningConfig, RoundingConfig, SmoothingMode, SolverConfig, ThetaMode


@dataclass
class EvalReport:
    """Dictionary quality metrics on one split of the corpus."""

    split: str
    n_trajectories: int
    n_covered: int
    dictionary_size: int
    dictionary_size_over_T: float
    mean_representation_cost: float
    trajectory_cover: float
    edge_cover: float
    mdl_score: Optional[float]
    provenance: Dict[str, Any] = field(default_factory=dict)

    @property
    def fully_covered(self) -> bool:
        return self.n_covered == self.n_trajectories

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class RunConfig:
    """
    Configuration of a learning run.

    Values come from a YAML file and are then overridden by command-line flags.
    """

    graph_path: Optional[str] = None
    trajectories_path: Optional[str] = None
    output_dir: str = "./pathlet_output"
    lambda_: float = 0.1
    theta_mode: str = ThetaMode.QUARTER_LN2T.value
    theta_value: Optional[float] = None
    theta_floor: float = 0.0
    c_min: int = 3
    max_len: int = 10
    min_traj_len: int = 2
    alpha: float = 0.05
    epsilon: float = 1e-6
    mu: float = 1.0
    mu_double_every: int = 200
    feasibility_tol: float = 1e-3
    smoothing: str = SmoothingMode.SOFTMAX.value
    tau: float = 0.05
    tau_min: float = 0.0125
    gap_tol: float = 0.05
    max_iters: int = 5000
    max_attempts: int = 3
    hierarchy_depth: int = 0
    hierarchy_levels: int = 2
    seed: Optional[int] = None
    test_fraction: float = 0.30
    workers: int = 1

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Build a config from a mapping, accepting ``lambda`` as the key for ``lambda_``."""
        data = dict(data)
        if "lambda" in data:
            data["lambda_"] = data.pop("lambda")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
        return cls(**data)

    def merged(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Return a copy with every non-None override applied."""
        data = asdict(self)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(data)

    def validate(self, randomized: bool = True) -> "RunConfig":
        if not 0 <= self.test_fraction < 1:
            raise ConfigError(f"test_fraction must be in [0, 1), got {self.test_fraction}")
        if randomized and self.seed is None:
            raise ConfigError("A seed is required for randomized runs")
        if self.c_min < 1 or self.max_len < 1:
            raise ConfigError("c_min and max_len must be at least 1")
        if self.min_traj_len < 1:
            raise ConfigError("min_traj_len must be at least 1")
        if self.hierarchy_depth < 0 or self.hierarchy_levels < 1:
            raise ConfigError("hierarchy_depth must be >= 0 and hierarchy_levels >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        try:
            ThetaMode(self.theta_mode)
            SmoothingMode(self.smoothing)
        except ValueError as e:
            raise ConfigError(str(e))
        self.solver_config().validate()
        self.rounding_config().validate()
        return self

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            lambda_=self.lambda_,
            alpha=self.alpha,
            epsilon=self.epsilon,
            mu=self.mu,
            mu_double_every=self.mu_double_every,
            feasibility_tol=self.feasibility_tol,
            smoothing=SmoothingMode(self.smoothing),
            tau=self.tau,
            tau_min=min(self.tau_min, self.tau),
            gap_tol=self.gap_tol,
            tau_floor=min(SolverConfig.tau_floor, self.tau_min, self.tau),
            max_iters=self.max_iters,
        )

    def rounding_config(self) -> RoundingConfig:
        return RoundingConfig(
            theta_mode=ThetaMode(self.theta_mode),
            theta_value=self.theta_value,
            theta_floor=self.theta_floor,
            max_attempts=self.max_attempts,
        )

    def learning_config(self) -> LearningConfig:
        return LearningConfig(
            solver=self.solver_config(),
            rounding=self.rounding_config(),
            max_len=self.max_len,
            c_min=self.c_min,
            min_traj_len=self.min_traj_len,
            seed=self.seed,
            workers=self.workers,
        )

    def to_dict(self, include_output: bool = False) -> Dict[str, Any]:
        data = asdict(self)
        data["lambda"] = data.pop("lambda_")
        if not include_output:
            data.pop("output_dir")
        return data

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON form, output directory excluded."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

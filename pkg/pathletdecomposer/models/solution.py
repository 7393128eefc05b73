"""
Solver and rounding data models for PathletDecomposer.

This module contains configuration and result classes for the relaxed
projected-gradient solver and the randomized rounding step.
"""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import ConfigError


class SmoothingMode(Enum):
    """Differentiable stand-ins for the row-max term."""

    SOFTMAX = "softmax"
    PNORM = "pnorm"


class ThetaMode(Enum):
    """How the rounding scale theta is chosen."""

    QUARTER_LN2T = "quarter_ln2T"
    LN2T = "ln2T"
    LN4T = "ln4T"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class SolverConfig:
    """Configuration of the relaxed projected-gradient solver."""

    lambda_: float = 0.1
    alpha: float = 0.05
    epsilon: float = 1e-6
    mu: float = 1.0
    mu_double_every: int = 200
    mu_max: float = 1e6
    feasibility_tol: float = 1e-3
    smoothing: SmoothingMode = SmoothingMode.SOFTMAX
    tau: float = 0.05
    tau_min: float = 0.0125
    gap_tol: float = 0.05
    tau_floor: float = 1e-4
    p_norm: float = 8.0
    max_iters: int = 5000
    restrict_to_subpaths: bool = True

    def validate(self) -> "SolverConfig":
        if not self.lambda_ > 0:
            raise ConfigError(f"lambda must be positive, got {self.lambda_}")
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if not self.mu > 0:
            raise ConfigError(f"mu must be positive, got {self.mu}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.mu_double_every < 1:
            raise ConfigError("mu_double_every must be at least 1")
        if not 0 < self.tau_min <= self.tau:
            raise ConfigError(f"need 0 < tau_min <= tau, got tau={self.tau}, tau_min={self.tau_min}")
        if not 0 < self.tau_floor <= self.tau_min:
            raise ConfigError(f"need 0 < tau_floor <= tau_min, got tau_floor={self.tau_floor}")
        if self.gap_tol < 0:
            raise ConfigError(f"gap_tol must be non-negative, got {self.gap_tol}")
        if self.p_norm < 1:
            raise ConfigError(f"p_norm must be >= 1, got {self.p_norm}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["lambda"] = data.pop("lambda_")
        data["smoothing"] = self.smoothing.value
        return data


@dataclass(frozen=True)
class RoundingConfig:
    """Configuration of the randomized rounding step."""

    theta_mode: ThetaMode = ThetaMode.QUARTER_LN2T
    theta_value: Optional[float] = None
    theta_floor: float = 0.0
    max_attempts: int = 3

    def validate(self) -> "RoundingConfig":
        if self.max_attempts < 1:
            raise ConfigError(f"max_attempts must be at least 1, got {self.max_attempts}")
        if self.theta_mode is ThetaMode.EXPLICIT and (self.theta_value is None or self.theta_value <= 0):
            raise ConfigError("explicit theta mode requires a positive theta_value")
        if self.theta_floor < 0:
            raise ConfigError("theta_floor must be non-negative")
        return self


@dataclass
class FractionalSolution:
    """Result of the relaxed solve: R* with its convergence history."""

    R_star: np.ndarray
    objective_trace: List[float] = field(default_factory=list)
    surrogate_trace: List[float] = field(default_factory=list)
    residual_trace: List[float] = field(default_factory=list)
    converged: bool = True
    iterations: int = 0
    residual: float = 0.0
    final_mu: float = 1.0
    final_tau: float = 0.05
    smoothing_gap_bound: float = 0.0
    config: SolverConfig = field(default_factory=SolverConfig)

    @property
    def shape(self):
        return self.R_star.shape

    @property
    def not_converged(self) -> bool:
        return not self.converged

    @property
    def objective(self) -> float:
        """Final true objective value."""
        return self.objective_trace[-1] if self.objective_trace else 0.0

    def to_dict(self) -> Dict[str, Any]:
        """Convergence summary; R* itself is written separately."""
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "residual": self.residual,
            "true_objective": self.objective,
            "surrogate": self.surrogate_trace[-1] if self.surrogate_trace else 0.0,
            "final_mu": self.final_mu,
            "final_tau": self.final_tau,
            "smoothing_gap_bound": self.smoothing_gap_bound,
        }


@dataclass
class BinarySolution:
    """A rounded decision matrix R^r."""

    R_r: Any  # SparseBinaryMatrix
    feasible: bool
    cost: float
    attempts_used: int
    seed: Optional[int]
    theta: float = 1.0
    repaired: bool = False
    good_event: bool = False

    @property
    def shape(self):
        return self.R_r.shape


@dataclass
class BoundReport:
    """Monte-Carlo check of the rounding success probability bound."""

    theta: float
    lambda_: float
    n_samples: int
    n_trajectories: int
    empirical_p: float
    theoretical_lower_bound: float
    margin: float
    passed: bool
    vacuous: bool
    theta_regime: str
    theta_floored: bool = False

    @property
    def theory_safe(self) -> bool:
        """Check if theta is at least ln(2|T|), the regime where the bound is positive."""
        return self.theta >= math.log(2 * max(self.n_trajectories, 1))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta": self.theta,
            "lambda": self.lambda_,
            "n_samples": self.n_samples,
            "n_trajectories": self.n_trajectories,
            "empirical_p": self.empirical_p,
            "theoretical_lower_bound": self.theoretical_lower_bound,
            "margin": self.margin,
            "pass": self.passed,
            "vacuous": self.vacuous,
            "theta_regime": self.theta_regime,
            "theta_floored": self.theta_floored,
        }


@dataclass(frozen=True)
class LearningConfig:
    """Everything a per-cell learning job needs."""

    solver: SolverConfig = field(default_factory=SolverConfig)
    rounding: RoundingConfig = field(default_factory=RoundingConfig)
    max_len: int = 10
    c_min: int = 3
    min_traj_len: int = 2
    seed: Optional[int] = None
    workers: int = 1

    def validate(self) -> "LearningConfig":
        self.solver.validate()
        self.rounding.validate()
        if self.max_len < 1 or self.c_min < 1 or self.min_traj_len < 1:
            raise ConfigError("max_len, c_min and min_traj_len must be at least 1")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        return self

"""
Objective evaluation of bit-vector selections with a per-run memo and
budget accounting.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from netimmune_core.lib.errors import ConfigError, GraphValidationError
from netimmune_core.lib.graph import (
    Graph,
    NodeSubset,
    eigen_drop,
    principal_eigenpair,
    selection_cost,
    selection_mask,
)
from netimmune_core.lib.models import GaConfig
from netimmune_core.lib.pareto import Front, ObjectivePoint

Objectives = Tuple[float, int]


def evaluate(g: Graph, costs: Sequence[int], x: NodeSubset) -> Objectives:
    """(eigen_drop(g, x), Σ x_i·cost_i)."""
    mask = selection_mask(g.n, x)
    return eigen_drop(g, mask), selection_cost(np.asarray(costs), mask)


def default_reference_point(g: Graph, costs: Sequence[int], base_lambda: Optional[float] = None) -> Tuple[float, float]:
    """(−0.05·max(λ, 1), Σcost + 1): strictly worse than every attainable point."""
    if base_lambda is None:
        base_lambda = principal_eigenpair(g).lambda_max
    return -0.05 * max(base_lambda, 1.0), float(np.sum(costs)) + 1.0


def check_run(g: Graph, costs: Sequence[int], config: GaConfig) -> None:
    """Reject runs the configuration cannot carry out on g."""
    if g.n == 0:
        raise GraphValidationError("evolutionary search needs a graph with at least one node")
    if len(costs) != g.n:
        raise GraphValidationError(f"cost vector has length {len(costs)} but graph has {g.n} nodes")
    if config.budget_mode == "evaluations" and config.evaluation_budget < config.population_size:
        raise ConfigError(
            f"evaluation_budget ({config.evaluation_budget}) is smaller than "
            f"population_size ({config.population_size})"
        )


def reference_point(g: Graph, costs: Sequence[int], config: GaConfig, base_lambda: float) -> Tuple[float, float]:
    """Configured reference point, checked to be strictly worse than every selection."""
    if config.reference_point is None:
        return default_reference_point(g, costs, base_lambda)
    ref = config.reference_point
    if ref[0] >= 0 or ref[1] <= float(np.sum(costs)):
        raise ConfigError(
            f"reference point {ref} must have delta_lambda < 0 and cost > {int(np.sum(costs))}"
        )
    return ref


class Evaluator:
    """
    Memoised objective function bound to one graph and cost vector.

    With memoize on, a repeated bit vector is served from the cache and does
    not count as an evaluation. Every distinct bit vector seen is kept so the
    run's archive can be rebuilt from it.
    """
    def __init__(
        self,
        g: Graph,
        costs: Sequence[int],
        budget: Optional[int] = None,
        memoize: bool = True,
        stall_factor: int = 10,
        solver: str = "power",
    ):
        self.g = g
        self.costs = np.asarray(costs, dtype=np.int64)
        if len(self.costs) != g.n:
            raise ValueError(f"cost vector has length {len(self.costs)} but graph has {g.n} nodes")
        self.budget = budget
        self.memoize = memoize
        self.stall_factor = stall_factor
        self.solver = solver
        self.base_lambda = principal_eigenpair(g, solver=solver).lambda_max
        self.evaluations = 0
        self.requests = 0
        self.cache: Dict[bytes, Objectives] = {}
        self.vectors: Dict[bytes, np.ndarray] = {}

    def __call__(self, x: np.ndarray) -> Objectives:
        mask = selection_mask(self.g.n, np.asarray(x, dtype=bool))
        key = np.packbits(mask).tobytes()
        self.requests += 1
        if self.memoize and key in self.cache:
            return self.cache[key]

        self.evaluations += 1
        if key in self.cache:
            return self.cache[key]
        objectives = (
            eigen_drop(self.g, mask, base_lambda=self.base_lambda, solver=self.solver),
            selection_cost(self.costs, mask),
        )
        self.cache[key] = objectives
        self.vectors[key] = mask
        return objectives

    @property
    def space_exhausted(self) -> bool:
        return self.memoize and len(self.cache) >= 2 ** self.g.n

    @property
    def stalled(self) -> bool:
        return self.budget is not None and self.requests >= self.stall_factor * self.budget

    @property
    def stop_reason(self) -> Optional[str]:
        """Why the run must stop, or None while evaluations may continue."""
        if self.budget is not None and self.evaluations >= self.budget:
            return "budget"
        if self.space_exhausted:
            return "space"
        if self.stalled:
            return "stall"
        return None

    @property
    def exhausted(self) -> bool:
        return self.stop_reason is not None

    def log_stop(self) -> None:
        reason = self.stop_reason
        if reason == "space":
            logging.debug(f"All {2 ** self.g.n} selections evaluated after {self.evaluations} evaluations")
        elif reason == "stall":
            logging.warning(
                f"Evaluation loop stalled: {self.requests} offspring produced only "
                f"{self.evaluations} new evaluations"
            )

    def archive(self, method: str = "", run: Optional[int] = None) -> Front:
        """Non-dominated filter of every distinct selection evaluated so far."""
        points = []
        for key, (delta_lambda, cost) in self.cache.items():
            selection = tuple(np.flatnonzero(self.vectors[key]).tolist())
            points.append(ObjectivePoint(
                delta_lambda=delta_lambda,
                cost=cost,
                method=method,
                nodes=self.g.labels_for(selection),
                selection=selection,
                run=run,
            ))
        return Front(points)


@dataclass
class RunResult:
    """
    Outcome of one evolutionary run.

    Attributes:
        archive: Non-dominated filter of every evaluated selection
        X: Final population as a boolean matrix
        F: Objective rows (delta_lambda, cost) of the final population
        evaluations: Evaluations charged against the budget
        steps: Generations (NSGA-II) or steady-state steps (SMS-EMOA)
        trace: Population hypervolume after initialisation and every step, when requested
        stop_reason: budget, space, stall or iterations
    """
    archive: Front
    X: np.ndarray
    F: np.ndarray
    evaluations: int
    steps: int
    trace: List[float] = field(default_factory=list)
    stop_reason: Optional[str] = None

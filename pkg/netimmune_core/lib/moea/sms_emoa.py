"""
Steady-state (μ+1) SMS-EMOA over node selections.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from netimmune_core.lib.graph import Graph
from netimmune_core.lib.models import GaConfig
from netimmune_core.lib.moea.evaluation import Evaluator, RunResult, check_run, reference_point
from netimmune_core.lib.moea.operators import initial_population, variation
from netimmune_core.lib.moea.sorting import nondominated_sort
from netimmune_core.lib.pareto import hv_contribution_2d, hypervolume_2d


def _least_contributor(F: np.ndarray, ref) -> int:
    """Index of the member to drop: smallest hypervolume contribution within the worst rank."""
    # Exact dominance, consistent with the hypervolume arithmetic.
    worst = nondominated_sort(F, tol=0.0)[-1]
    if len(worst) == 1:
        return worst[0]
    contributions = hv_contribution_2d(F[worst], ref)
    return worst[int(np.argmin(contributions))]


def sms_emoa_run(
    g: Graph,
    costs: Sequence[int],
    config: GaConfig,
    init: Optional[np.ndarray] = None,
    *,
    method: str = "sms_emoa",
    run: Optional[int] = None,
    solver: str = "power",
) -> RunResult:
    """
    Run SMS-EMOA until the evaluation budget is spent.

    Every step draws two parents uniformly, keeps the first offspring of
    their crossover and mutation, and removes the least hypervolume
    contributor of the worst rank from the enlarged population. The
    reference point is fixed for the run.
    """
    check_run(g, costs, config)
    rng = np.random.default_rng(config.seed)
    p_m = config.resolved_p_m(g.n)
    by_step = config.budget_mode == "iterations"
    evaluator = Evaluator(
        g,
        costs,
        budget=None if by_step else config.evaluation_budget,
        memoize=config.memoize,
        stall_factor=config.stall_factor,
        solver=solver,
    )
    ref = reference_point(g, costs, config, evaluator.base_lambda)

    X = initial_population(rng, config.population_size, g.n, init)
    F = np.array([evaluator(x) for x in X], dtype=np.float64)
    trace = [hypervolume_2d(F, ref)] if config.trace else []
    steps = 0

    while (steps < config.evaluation_budget) if by_step else not evaluator.exhausted:
        a, b = rng.integers(len(X), size=2)
        child, _ = variation(rng, X[a], X[b], config.p_c, p_m)
        X = np.vstack([X, child[None, :]])
        F = np.vstack([F, np.array(evaluator(child), dtype=np.float64)[None, :]])
        drop = _least_contributor(F, ref)
        X = np.delete(X, drop, axis=0)
        F = np.delete(F, drop, axis=0)
        steps += 1
        if config.trace:
            trace.append(hypervolume_2d(F, ref))
        if steps % 1000 == 0:
            logging.debug(f"SMS-EMOA step {steps}: {len(evaluator.cache)} distinct selections")

    evaluator.log_stop()
    archive = evaluator.archive(method=method, run=run)
    logging.info(
        f"SMS-EMOA finished after {steps} steps and {evaluator.evaluations} evaluations, "
        f"archive holds {len(archive)} points"
    )
    return RunResult(
        archive=archive,
        X=X,
        F=F,
        evaluations=evaluator.evaluations,
        steps=steps,
        trace=trace,
        stop_reason="iterations" if by_step else evaluator.stop_reason,
    )

"""
Generational NSGA-II over node selections.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from netimmune_core.lib.graph import Graph
from netimmune_core.lib.models import GaConfig
from netimmune_core.lib.moea.evaluation import Evaluator, RunResult, check_run, reference_point
from netimmune_core.lib.moea.operators import binary_tournament, initial_population, variation
from netimmune_core.lib.moea.sorting import rank_and_crowding, truncate
from netimmune_core.lib.pareto import hypervolume_2d


def nsga2_run(
    g: Graph,
    costs: Sequence[int],
    config: GaConfig,
    init: Optional[np.ndarray] = None,
    *,
    method: str = "nsga2",
    run: Optional[int] = None,
    solver: str = "power",
) -> RunResult:
    """
    Run NSGA-II until the evaluation budget is spent.

    Each generation breeds population_size offspring by binary tournament on
    (rank, crowding), uniform crossover and bit-flip mutation, then keeps the
    best population_size of parents and offspring by rank and crowding. With
    budget_mode "iterations" the budget counts generations instead.
    """
    check_run(g, costs, config)
    rng = np.random.default_rng(config.seed)
    p_m = config.resolved_p_m(g.n)
    by_generation = config.budget_mode == "iterations"
    evaluator = Evaluator(
        g,
        costs,
        budget=None if by_generation else config.evaluation_budget,
        memoize=config.memoize,
        stall_factor=config.stall_factor,
        solver=solver,
    )
    ref = reference_point(g, costs, config, evaluator.base_lambda) if config.trace else None

    X = initial_population(rng, config.population_size, g.n, init)
    F = np.array([evaluator(x) for x in X], dtype=np.float64)
    trace = [hypervolume_2d(F, ref)] if ref is not None else []
    generations = 0

    while (generations < config.evaluation_budget) if by_generation else not evaluator.exhausted:
        rank, crowding = rank_and_crowding(F)
        children, objectives = [], []
        while len(children) < config.population_size and (by_generation or not evaluator.exhausted):
            a = X[binary_tournament(rng, rank, crowding)]
            b = X[binary_tournament(rng, rank, crowding)]
            for child in variation(rng, a, b, config.p_c, p_m):
                if len(children) == config.population_size or (not by_generation and evaluator.exhausted):
                    break
                children.append(child)
                objectives.append(evaluator(child))

        X_all = np.vstack([X, np.array(children, dtype=bool)])
        F_all = np.vstack([F, np.array(objectives, dtype=np.float64)])
        survivors = truncate(F_all, config.population_size)
        X, F = X_all[survivors], F_all[survivors]
        generations += 1
        if ref is not None:
            trace.append(hypervolume_2d(F, ref))
        logging.debug(
            f"NSGA-II generation {generations}: {evaluator.evaluations} evaluations, "
            f"{len(evaluator.cache)} distinct selections"
        )

    evaluator.log_stop()
    archive = evaluator.archive(method=method, run=run)
    logging.info(
        f"NSGA-II finished after {generations} generations and {evaluator.evaluations} evaluations, "
        f"archive holds {len(archive)} points"
    )
    return RunResult(
        archive=archive,
        X=X,
        F=F,
        evaluations=evaluator.evaluations,
        steps=generations,
        trace=trace,
        stop_reason="iterations" if by_generation else evaluator.stop_reason,
    )

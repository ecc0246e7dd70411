"""
Warm-start populations built from previously computed fronts.
"""

import logging
from typing import Iterable, List, Set, Tuple

import numpy as np

from netimmune_core.lib.errors import GraphValidationError
from netimmune_core.lib.graph import Graph
from netimmune_core.lib.moea.operators import random_population
from netimmune_core.lib.moea.sorting import truncate
from netimmune_core.lib.pareto import ObjectivePoint


def _point_vector(g: Graph, point: ObjectivePoint) -> np.ndarray:
    x = np.zeros(g.n, dtype=bool)
    if point.selection:
        if max(point.selection) >= g.n:
            raise GraphValidationError(f"selection {point.selection} does not fit a graph with {g.n} nodes")
        x[list(point.selection)] = True
        return x
    for label in point.nodes:
        if label not in g.index_of:
            raise GraphValidationError(f"front references unknown node {label!r}")
        x[g.index_of[label]] = True
    return x


def make_hybrid_init(
    fronts: Iterable[Iterable[ObjectivePoint]],
    population_size: int,
    g: Graph,
    seed: int,
) -> np.ndarray:
    """
    Initial population holding every distinct selection of the given fronts.

    Fewer selections than population_size are padded with uniform-random bit
    vectors; more are cut down by rank then crowding distance.
    """
    if population_size < 1:
        raise GraphValidationError(f"population_size must be >= 1, got {population_size}")

    seen: Set[bytes] = set()
    vectors: List[np.ndarray] = []
    objectives: List[Tuple[float, int]] = []
    for front in fronts:
        for point in front:
            x = _point_vector(g, point)
            key = np.packbits(x).tobytes()
            if key in seen:
                continue
            seen.add(key)
            vectors.append(x)
            objectives.append(point.objectives)

    if len(vectors) > population_size:
        kept = truncate(np.array(objectives, dtype=np.float64), population_size)
        vectors = [vectors[i] for i in kept]

    seeded = np.array(vectors, dtype=bool) if vectors else np.zeros((0, g.n), dtype=bool)
    logging.info(f"Hybrid initialisation seeds {len(seeded)} of {population_size} individuals")
    if len(seeded) == population_size:
        return seeded
    rng = np.random.default_rng(seed)
    return np.vstack([seeded, random_population(rng, population_size - len(seeded), g.n)])

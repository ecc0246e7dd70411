"""
Non-dominated sorting, crowding distance and survivor truncation for
(maximise Δλ, minimise cost) objective rows.
"""

from typing import Iterable, List, Tuple, Union

import numpy as np

from netimmune_core.lib.pareto import DL_TOL, objective_array
from netimmune_core.lib.pareto.objects import PointLike

Points = Union[np.ndarray, Iterable[PointLike]]


def dominance_matrix(F: np.ndarray, tol: float = DL_TOL) -> np.ndarray:
    """D[i, j] is True when row i strictly dominates row j."""
    delta_lambda, cost = F[:, 0], F[:, 1]
    no_worse = (delta_lambda[:, None] >= delta_lambda[None, :] - tol) & (cost[:, None] <= cost[None, :])
    better = (delta_lambda[:, None] > delta_lambda[None, :] + tol) | (cost[:, None] < cost[None, :])
    return no_worse & better


def nondominated_sort(points: Points, tol: float = DL_TOL) -> List[List[int]]:
    """
    Partition points into ranked fronts of indices.

    Rank 0 is the non-dominated set; every member of rank r is dominated by
    some member of rank r-1. Indices within a rank are ascending.
    """
    F = objective_array(points)
    if not len(F):
        return []
    dominated_by = dominance_matrix(F, tol)
    counts = dominated_by.sum(axis=0)
    assigned = np.zeros(len(F), dtype=bool)
    fronts: List[List[int]] = []

    current = np.flatnonzero(counts == 0)
    while len(current):
        fronts.append(current.tolist())
        assigned[current] = True
        counts = counts - dominated_by[current].sum(axis=0)
        current = np.flatnonzero((counts == 0) & ~assigned)
    return fronts


def crowding_distance(points: Points) -> np.ndarray:
    """Crowding distance of each point within its own front; boundary points are infinite."""
    F = objective_array(points)
    m = len(F)
    distance = np.zeros(m)
    if m <= 2:
        distance[:] = np.inf
        return distance

    for column in range(F.shape[1]):
        order = np.argsort(F[:, column], kind="stable")
        values = F[order, column]
        distance[order[0]] = distance[order[-1]] = np.inf
        span = values[-1] - values[0]
        if span <= 0:
            continue
        distance[order[1:-1]] += (values[2:] - values[:-2]) / span
    return distance


def rank_and_crowding(points: Points, tol: float = DL_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Per-point rank and crowding distance within that rank."""
    F = objective_array(points)
    rank = np.zeros(len(F), dtype=np.int64)
    crowding = np.zeros(len(F))
    for r, front in enumerate(nondominated_sort(F, tol)):
        rank[front] = r
        crowding[front] = crowding_distance(F[front])
    return rank, crowding


def truncate(points: Points, size: int, tol: float = DL_TOL) -> List[int]:
    """
    Indices of the size survivors: whole ranks first, the last partial rank
    by descending crowding distance (lower index on ties). Sorted ascending.
    """
    F = objective_array(points)
    if size >= len(F):
        return list(range(len(F)))

    kept: List[int] = []
    for front in nondominated_sort(F, tol):
        if len(kept) + len(front) <= size:
            kept.extend(front)
            continue
        crowding = crowding_distance(F[front])
        order = sorted(range(len(front)), key=lambda i: (-crowding[i], front[i]))
        kept.extend(front[i] for i in order[:size - len(kept)])
        break
    return sorted(kept)

"""
Two-objective quality indicators: hypervolume, hypervolume contributions and
k-th attainment curves.

Objective space is (Δλ, cost) with Δλ maximised and cost minimised. The
reference point is a plain (Δλ, cost) pair and may have a negative Δλ.
"""

from dataclasses import replace
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from netimmune_core.lib.pareto.front import AttainmentCurve
from netimmune_core.lib.pareto.objects import ObjectivePoint, PointLike, as_point

RefLike = Union[ObjectivePoint, Sequence[float]]


def _ref_pair(ref: RefLike) -> Tuple[float, float]:
    if isinstance(ref, ObjectivePoint):
        return ref.delta_lambda, float(ref.cost)
    delta_lambda, cost = ref
    return float(delta_lambda), float(cost)


def objective_array(points: Union[np.ndarray, Iterable[PointLike]]) -> np.ndarray:
    """(m, 2) float array of (delta_lambda, cost) rows."""
    if isinstance(points, np.ndarray):
        return np.asarray(points, dtype=np.float64).reshape(-1, 2)
    rows = [p.objectives if isinstance(p, ObjectivePoint) else tuple(p) for p in points]
    return np.array(rows, dtype=np.float64).reshape(-1, 2)


def _check_reference(arr: np.ndarray, ref: Tuple[float, float]) -> None:
    if arr.size and (np.any(arr[:, 0] <= ref[0]) or np.any(arr[:, 1] >= ref[1])):
        raise ValueError(
            f"reference point {ref} must be strictly worse than every point in both objectives"
        )


def _staircase(arr: np.ndarray) -> List[Tuple[float, float]]:
    order = np.lexsort((-arr[:, 0], arr[:, 1]))
    stair: List[Tuple[float, float]] = []
    best = -np.inf
    for delta_lambda, cost in arr[order]:
        if delta_lambda > best:
            stair.append((float(delta_lambda), float(cost)))
            best = delta_lambda
    return stair


def hypervolume_2d(points: Union[np.ndarray, Iterable[PointLike]], ref: RefLike) -> float:
    """Area dominated by the points and bounded by the reference point."""
    arr = objective_array(points)
    ref_pair = _ref_pair(ref)
    _check_reference(arr, ref_pair)
    if not arr.size:
        return 0.0

    stair = _staircase(arr)
    area = 0.0
    for position, (delta_lambda, cost) in enumerate(stair):
        next_cost = stair[position + 1][1] if position + 1 < len(stair) else ref_pair[1]
        area += (next_cost - cost) * (delta_lambda - ref_pair[0])
    return area


def hv_contribution_2d(points: Union[np.ndarray, Iterable[PointLike]], ref: RefLike) -> np.ndarray:
    """
    Exclusive hypervolume of each point: hv(P) − hv(P ∖ {p}).

    Dominated points and points with an exact duplicate contribute 0.
    """
    arr = objective_array(points)
    ref_pair = _ref_pair(ref)
    _check_reference(arr, ref_pair)
    contributions = np.zeros(len(arr))
    if not arr.size:
        return contributions

    order = np.lexsort((-arr[:, 0], arr[:, 1]))
    groups: List[List[int]] = []
    for i in order:
        if groups and np.array_equal(arr[groups[-1][0]], arr[i]):
            groups[-1].append(int(i))
        else:
            groups.append([int(i)])

    stair: List[List[int]] = []
    best = -np.inf
    for group in groups:
        if arr[group[0], 0] > best:
            stair.append(group)
            best = arr[group[0], 0]

    for position, group in enumerate(stair):
        if len(group) > 1:
            continue
        delta_lambda, cost = arr[group[0]]
        left = arr[stair[position - 1][0], 0] if position > 0 else ref_pair[0]
        right = arr[stair[position + 1][0], 1] if position + 1 < len(stair) else ref_pair[1]
        contributions[group[0]] = (right - cost) * (delta_lambda - left)
    return contributions


def first_attainment_curve(runs: Sequence[Iterable[PointLike]], k: int = 1) -> AttainmentCurve:
    """
    Boundary of the region weakly dominated by at least k of the runs.

    For every candidate cost c, each run attains up to the best Δλ among its
    points with cost ≤ c; the k-th largest of those values is the curve
    height at c. k=1 gives the non-dominated union of all runs.
    """
    run_points = [sorted((as_point(p) for p in run), key=lambda p: (p.cost, -p.delta_lambda)) for run in runs]
    if not run_points:
        raise ValueError("first_attainment_curve needs at least one run")
    if k < 1 or k > len(run_points):
        raise ValueError(f"k must lie in [1, {len(run_points)}], got {k}")

    costs = sorted({p.cost for points in run_points for p in points})
    cursors = [0] * len(run_points)
    best: List[Optional[ObjectivePoint]] = [None] * len(run_points)
    candidates: List[ObjectivePoint] = []

    for cost in costs:
        for r, points in enumerate(run_points):
            while cursors[r] < len(points) and points[cursors[r]].cost <= cost:
                point = points[cursors[r]]
                if best[r] is None or point.delta_lambda > best[r].delta_lambda:
                    best[r] = point
                cursors[r] += 1

        attained = sorted(
            ((best[r], r) for r in range(len(run_points)) if best[r] is not None),
            key=lambda item: (-item[0].delta_lambda, item[1]),
        )
        if len(attained) < k:
            continue
        point = attained[k - 1][0]
        if point.cost != cost:
            point = replace(point, cost=cost, nodes=(), selection=(), shield_value=None, optimal=None)
        candidates.append(point)

    return AttainmentCurve(candidates, k=k)

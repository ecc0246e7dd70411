"""
Front and AttainmentCurve containers for ObjectivePoint instances.
"""

from typing import Callable, Iterable, List, Optional

import numpy as np

from netimmune_core.lib.pareto.objects import DL_TOL, ObjectivePoint, PointLike, as_point


def _sort_key(point: ObjectivePoint):
    return (
        point.cost,
        -point.delta_lambda,
        point.method,
        point.nodes,
        point.selection,
        -1 if point.run is None else point.run,
        point.source or "",
    )


def _filter(points: Iterable[PointLike], tol: float) -> List[ObjectivePoint]:
    kept: List[ObjectivePoint] = []
    best = -np.inf
    for point in sorted((as_point(p) for p in points), key=_sort_key):
        if point.delta_lambda > best + tol:
            kept.append(point)
            best = point.delta_lambda
    return kept


class Front(list):
    """
    Mutually non-dominated points, sorted by ascending cost with strictly
    increasing delta_lambda. Construction filters its input.
    """
    def __init__(self, items: Optional[Iterable[PointLike]] = None, tol: float = DL_TOL):
        super().__init__(_filter(items or [], tol))

    def merge(self, other: Iterable[PointLike]) -> "Front":
        return Front(list(self) + list(other))

    def objectives(self) -> np.ndarray:
        """(m, 2) array of (delta_lambda, cost) rows."""
        return np.array([[p.delta_lambda, p.cost] for p in self], dtype=np.float64).reshape(-1, 2)

    def to_dict_list(self) -> List[dict]:
        return [point.to_dict() for point in self]

    @classmethod
    def from_dict_list(cls, dicts: List[dict]) -> "Front":
        return cls([ObjectivePoint.from_dict(d) for d in dicts])

    def filter(self, predicate: Callable[[ObjectivePoint], bool]) -> "Front":
        return Front([p for p in self if predicate(p)])

    def __str__(self):
        return f"Front({len(self)} points)"

    def __repr__(self):
        return f"Front(points={list.__repr__(self)})"


class AttainmentCurve(Front):
    """Boundary of the region attained by at least k runs."""
    def __init__(self, items: Optional[Iterable[PointLike]] = None, k: int = 1, tol: float = DL_TOL):
        super().__init__(items, tol)
        self.k = k

    def __str__(self):
        return f"AttainmentCurve(k={self.k}, {len(self)} points)"


def nondominated_filter(points: Iterable[PointLike], tol: float = DL_TOL) -> Front:
    """
    Maximal mutually non-dominated subset of points.

    Exact duplicates (same cost, Δλ within tol) collapse to the first point
    in (cost, -Δλ, provenance) order, so the result is order-invariant.
    """
    return Front(points, tol)

from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Sequence, Tuple, Union

# Absolute tolerance on Δλ when deciding dominance ties.
DL_TOL = 1e-9


@dataclass(frozen=True)
class ObjectivePoint:
    """
    One evaluated solution of the immunisation problem.

    Attributes:
        delta_lambda: Eigen-drop achieved by the selection (maximised)
        cost: Total removal cost of the selection (minimised)
        method: Tag of the method that produced the point
        nodes: Original labels of the selected nodes
        selection: Indices of the selected nodes in the source graph
        shield_value: Shield-value of the selection, when a QP method produced it
        optimal: False when a branch-and-bound node limit cut the solve short
        run: Repetition index for stochastic methods
        source: File the point was read from, for merged fronts
    """
    delta_lambda: float
    cost: int
    method: str = ""
    nodes: Tuple[str, ...] = ()
    selection: Tuple[int, ...] = ()
    shield_value: Optional[float] = None
    optimal: Optional[bool] = None
    run: Optional[int] = None
    source: Optional[str] = None

    def __post_init__(self):
        delta_lambda = float(self.delta_lambda)
        if float(self.cost) != int(self.cost):
            raise ValueError(f"cost must be an integer, got {self.cost!r}")
        cost = int(self.cost)
        if delta_lambda < -DL_TOL:
            raise ValueError(f"delta_lambda must be nonnegative, got {delta_lambda}")
        if cost < 0:
            raise ValueError(f"cost must be nonnegative, got {cost}")
        object.__setattr__(self, "delta_lambda", max(delta_lambda, 0.0))
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "nodes", tuple(str(label) for label in self.nodes))
        object.__setattr__(self, "selection", tuple(int(i) for i in self.selection))

    @property
    def objectives(self) -> Tuple[float, int]:
        return self.delta_lambda, self.cost

    def with_provenance(self, **changes: Any) -> "ObjectivePoint":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "delta_lambda": self.delta_lambda,
            "cost": self.cost,
            "method": self.method,
            "nodes": list(self.nodes),
            "selection": list(self.selection),
            "shield_value": self.shield_value,
            "optimal": self.optimal,
            "run": self.run,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ObjectivePoint":
        return cls(
            delta_lambda=data["delta_lambda"],
            cost=data["cost"],
            method=data.get("method", ""),
            nodes=tuple(data.get("nodes", ())),
            selection=tuple(data.get("selection", ())),
            shield_value=data.get("shield_value"),
            optimal=data.get("optimal"),
            run=data.get("run"),
            source=data.get("source"),
        )

    def __str__(self) -> str:
        return f"ObjectivePoint(Δλ={self.delta_lambda:.6g}, cost={self.cost}, {self.method or 'untagged'})"


PointLike = Union[ObjectivePoint, Sequence[float]]


def as_point(point: PointLike) -> ObjectivePoint:
    """Accept ObjectivePoints or plain (delta_lambda, cost) pairs."""
    if isinstance(point, ObjectivePoint):
        return point
    delta_lambda, cost = point
    return ObjectivePoint(delta_lambda=delta_lambda, cost=cost)


def dominates(a: PointLike, b: PointLike, tol: float = DL_TOL) -> bool:
    """Strict Pareto dominance under (maximise Δλ, minimise cost)."""
    a, b = as_point(a), as_point(b)
    if a.delta_lambda < b.delta_lambda - tol or a.cost > b.cost:
        return False
    return a.delta_lambda > b.delta_lambda + tol or a.cost < b.cost


def weakly_dominates(a: PointLike, b: PointLike, tol: float = DL_TOL) -> bool:
    a, b = as_point(a), as_point(b)
    return a.delta_lambda >= b.delta_lambda - tol and a.cost <= b.cost

"""
Exact Shield-value maximisation under a cost budget, and the ε-constraint
sweeps built on it.

The objective of a selection x is

    f(x) = Σ_i linear_i x_i − Σ_{i<j} weight_ij x_i x_j

with linear_i = 2λu_i² and weight_ij = 2u_iu_j on edges. It is maximised
subject to Σ_i cost_i x_i ≤ budget and, optionally, Σ_i x_i ≤ cap.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from netimmune_core.lib.errors import GraphValidationError
from netimmune_core.lib.graph import (
    EigenPair,
    Graph,
    NodeSubset,
    eigen_drop,
    principal_eigenpair,
    remove_nodes,
    selection_indices,
    selection_mask,
)
from netimmune_core.lib.pareto import Front, ObjectivePoint, nondominated_filter
from netimmune_core.lib.shield import shield_value

PAIR_EPS = 1e-15
PRUNE_TOL = 1e-12
TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class QpInstance:
    """
    Coefficients of one budgeted Shield-value program.

    Attributes:
        linear: linear[i] = 2λu_i²
        weights: Symmetric matrix holding 2u_iu_j on kept edges, 0 elsewhere
        costs: Integer removal cost per node
        budget: Cost budget ε
        cardinality_cap: Optional bound on the number of selected nodes
    """
    linear: np.ndarray
    weights: np.ndarray
    costs: np.ndarray
    budget: int
    cardinality_cap: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.linear)

    @property
    def pairwise(self) -> Dict[Tuple[int, int], float]:
        rows, cols = np.nonzero(np.triu(self.weights, 1))
        return {(int(i), int(j)): float(self.weights[i, j]) for i, j in zip(rows, cols)}

    def with_budget(self, budget: int) -> "QpInstance":
        return QpInstance(self.linear, self.weights, self.costs, budget, self.cardinality_cap)


@dataclass(frozen=True, eq=False)
class QpSolution:
    """Maximiser returned by solve_budget_qp."""
    x: np.ndarray
    objective: float
    cost: int
    optimal: bool
    nodes_explored: int

    @property
    def indices(self) -> List[int]:
        return np.flatnonzero(self.x).tolist()


def build_qp(
    g: Graph,
    ep: EigenPair,
    costs: Sequence[int],
    budget: int,
    cap: Optional[int] = None,
) -> QpInstance:
    """Populate the Shield-value program for g from its principal eigenpair."""
    costs = np.asarray(costs, dtype=np.int64)
    if ep.n != g.n or len(costs) != g.n:
        raise GraphValidationError(
            f"dimension mismatch: graph has {g.n} nodes, eigenvector {ep.n}, costs {len(costs)}"
        )
    if budget < 0:
        raise GraphValidationError(f"budget must be nonnegative, got {budget}")
    if np.any(costs < 0):
        raise GraphValidationError("costs must be nonnegative")
    if cap is not None and cap < 0:
        raise GraphValidationError(f"cardinality cap must be nonnegative, got {cap}")

    u = ep.u
    linear = 2.0 * ep.lambda_max * u * u
    products = np.outer(u, u)
    weights = np.where((g.adjacency == 1) & (products >= PAIR_EPS), 2.0 * products, 0.0)
    for array in (linear, weights, costs):
        array.setflags(write=False)
    return QpInstance(linear, weights, costs, int(budget), cap)


def qp_objective(q: QpInstance, nodes: NodeSubset) -> float:
    """Objective of a selection in canonical summation order."""
    idx = selection_indices(q.n, nodes)
    if not idx:
        return 0.0
    linear = float(q.linear[idx].sum())
    pairwise = float(np.triu(q.weights[np.ix_(idx, idx)], 1).sum())
    return linear - pairwise


class _NodeLimitReached(Exception):
    pass


class _BranchAndBound:
    """
    Depth-first branch-and-bound over node inclusion.

    Variables are visited by descending linear_i / max(cost_i, 1). At each
    branch node the current partial selection (undecided variables at 0) is
    feasible, and the bound adds a fractional knapsack over the remaining
    gains linear_j − Σ_{i selected} weight_ij. The search keeps an explicit
    stack and explores the inclusion branch before the exclusion branch.
    """
    def __init__(
        self,
        q: QpInstance,
        fixed_zero: Iterable[int] = (),
        fixed_one: Iterable[int] = (),
        node_limit: Optional[int] = None,
    ):
        self.q = q
        self.fixed_zero: Set[int] = set(fixed_zero)
        self.fixed_one: List[int] = sorted(set(fixed_one))
        self.node_limit = node_limit
        ratio = q.linear / np.maximum(q.costs, 1)
        order = sorted(range(q.n), key=lambda i: (-ratio[i], i))
        skip = self.fixed_zero | set(self.fixed_one)
        self.order = np.array([i for i in order if i not in skip], dtype=np.int64)
        self.nodes = 0
        self.best_value = -np.inf
        self.best_x: Optional[np.ndarray] = None
        self.target: Optional[float] = None
        self.found: Optional[np.ndarray] = None

    def maximize(self) -> np.ndarray:
        self._run()
        return self.best_x

    def reach(self, target: float) -> Optional[np.ndarray]:
        """Find any selection with objective ≥ target, or None."""
        self.target = target
        self._run()
        return self.found

    def _run(self) -> None:
        q = self.q
        x = np.zeros(q.n, dtype=bool)
        penalty = np.zeros(q.n)
        value, cost = 0.0, 0
        for i in self.fixed_one:
            value += q.linear[i] - penalty[i]
            penalty = penalty + q.weights[i]
            cost += int(q.costs[i])
            x[i] = True
        count = len(self.fixed_one)
        if cost > q.budget or (q.cardinality_cap is not None and count > q.cardinality_cap):
            return
        self._search(x, penalty, value, cost, count)

    def _bound(self, depth: int, penalty: np.ndarray, value: float, cost: int, count: int) -> float:
        q = self.q
        rest = self.order[depth:]
        if not len(rest):
            return value
        slots = None if q.cardinality_cap is None else q.cardinality_cap - count
        if slots is not None and slots <= 0:
            return value

        room = q.budget - cost
        gains = q.linear[rest] - penalty[rest]
        weights = q.costs[rest]
        useful = (gains > 0) & (weights <= room)
        gains, weights = gains[useful], weights[useful]
        if not len(gains):
            return value

        free = weights == 0
        relaxed = float(gains[free].sum())
        paid_gains, paid_weights = gains[~free], weights[~free]
        if len(paid_gains):
            order = np.argsort(-paid_gains / paid_weights, kind="stable")
            filled = np.cumsum(paid_weights[order])
            whole = int(np.searchsorted(filled, room, side="right"))
            relaxed += float(paid_gains[order[:whole]].sum())
            if whole < len(order):
                used = int(filled[whole - 1]) if whole else 0
                nxt = order[whole]
                relaxed += paid_gains[nxt] * (room - used) / paid_weights[nxt]

        if slots is not None:
            relaxed = min(relaxed, float(np.sort(gains)[::-1][:slots].sum()))
        return value + relaxed

    def _search(self, x: np.ndarray, penalty: np.ndarray, value: float, cost: int, count: int) -> None:
        q = self.q
        # Each frame records whether order[depth - 1] was taken on its path.
        stack = [(0, False, penalty, value, cost, count)]
        while stack:
            depth, take, penalty, value, cost, count = stack.pop()
            if depth:
                x[self.order[depth - 1:]] = False
                x[self.order[depth - 1]] = take

            self.nodes += 1
            if self.node_limit is not None and self.nodes > self.node_limit:
                raise _NodeLimitReached()

            if self.target is None:
                if value > self.best_value:
                    self.best_value = value
                    self.best_x = x.copy()
                if self._bound(depth, penalty, value, cost, count) <= self.best_value + PRUNE_TOL:
                    continue
            else:
                if value >= self.target:
                    self.found = x.copy()
                    return
                if self._bound(depth, penalty, value, cost, count) < self.target:
                    continue

            if depth == len(self.order):
                continue

            v = int(self.order[depth])
            gain = q.linear[v] - penalty[v]
            fits = cost + q.costs[v] <= q.budget and (q.cardinality_cap is None or count < q.cardinality_cap)
            stack.append((depth + 1, False, penalty, value, cost, count))
            # A node with nonpositive gain never improves a selection.
            if gain > 0 and fits:
                stack.append((depth + 1, True, penalty + q.weights[v], value + gain, cost + int(q.costs[v]), count + 1))


def solve_budget_qp(q: QpInstance, node_limit: Optional[int] = None) -> QpSolution:
    """
    Provably optimal maximiser of the budgeted Shield-value program.

    Among optima within 1e-12 of the best objective, the lexicographically
    smallest selection vector is returned: once the optimum is known,
    variables are fixed in index order to 0 whenever an optimum survives.

    node_limit caps the branch nodes of every search. When the maximising
    search exceeds it, the incumbent is returned with optimal=False. When a
    tie-breaking search exceeds it, the optimum found so far is kept and
    tie-breaking stops.
    """
    search = _BranchAndBound(q, node_limit=node_limit)
    try:
        best_x = search.maximize()
    except _NodeLimitReached:
        x = search.best_x if search.best_x is not None else np.zeros(q.n, dtype=bool)
        logging.warning(f"Branch-and-bound node limit {node_limit} reached at budget {q.budget}")
        return QpSolution(x, qp_objective(q, x), int(q.costs[x].sum()), False, search.nodes)

    explored = search.nodes
    threshold = qp_objective(q, best_x) - TIE_TOL
    candidate = best_x
    fixed_zero: Set[int] = set()
    fixed_one: List[int] = []
    for i in range(q.n):
        if not candidate[i]:
            fixed_zero.add(i)
            continue
        tie_search = _BranchAndBound(q, fixed_zero | {i}, fixed_one, node_limit=node_limit)
        try:
            witness = tie_search.reach(threshold)
        except _NodeLimitReached:
            explored += tie_search.nodes
            logging.debug(f"Budget {q.budget}: tie-breaking stopped at node {i}")
            break
        explored += tie_search.nodes
        if witness is None:
            fixed_one.append(i)
        else:
            candidate = witness
            fixed_zero.add(i)

    logging.debug(f"Budget {q.budget}: explored {explored} branch nodes")
    return QpSolution(
        x=candidate,
        objective=qp_objective(q, candidate),
        cost=int(q.costs[candidate].sum()),
        optimal=True,
        nodes_explored=explored,
    )


def budget_grid(costs: Sequence[int], eps_max: Optional[int] = None, stride: int = 1) -> List[int]:
    """ε values 0, stride, 2·stride, … up to eps_max (default Σ costs)."""
    if stride < 1:
        raise GraphValidationError(f"stride must be >= 1, got {stride}")
    upper = int(np.sum(costs)) if eps_max is None else int(eps_max)
    if upper < 0:
        raise GraphValidationError(f"eps_max must be nonnegative, got {upper}")
    return list(range(0, upper + 1, stride))


def _solve_selection(q: QpInstance, node_limit: Optional[int] = None) -> Tuple[Tuple[int, ...], bool]:
    solution = solve_budget_qp(q, node_limit=node_limit)
    return tuple(solution.indices), solution.optimal


def _batched_selection(
    g: Graph,
    costs: np.ndarray,
    b: int,
    budget: int,
    solver: str = "power",
    node_limit: Optional[int] = None,
) -> Tuple[Tuple[int, ...], bool]:
    residual = g
    positions = list(range(g.n))
    remaining = budget
    selected: List[int] = []
    optimal = True

    while residual.n:
        ep = principal_eigenpair(residual, solver=solver)
        q = build_qp(residual, ep, costs[positions], remaining, cap=b)
        solution = solve_budget_qp(q, node_limit=node_limit)
        optimal = optimal and solution.optimal
        batch = solution.indices
        if not batch:
            break
        selected.extend(positions[i] for i in batch)
        remaining -= int(q.costs[batch].sum())
        batch_set = set(batch)
        positions = [p for i, p in enumerate(positions) if i not in batch_set]
        # With b >= residual.n the cap never bound, so this batch was unconstrained.
        if b >= residual.n:
            break
        residual = remove_nodes(residual, batch)

    return tuple(sorted(selected)), optimal


def _map(function, arguments: List[tuple], workers: int) -> list:
    if workers > 1 and len(arguments) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(function, *zip(*arguments)))
    return [function(*args) for args in arguments]


def score_selections(
    g: Graph,
    ep: EigenPair,
    costs: np.ndarray,
    selections: Iterable[Tuple[int, ...]],
    method: str,
    *,
    solver: str = "power",
    proven: Optional[Iterable[bool]] = None,
) -> Front:
    """
    Non-dominated front of the selections, each scored by true eigen-drop and
    Shield-value on ep.

    proven holds one optimality flag per selection. A selection produced by
    several solves is optimal when any of them was.
    """
    selections = list(selections)
    flags = [None] * len(selections) if proven is None else list(proven)
    optimal: Dict[Tuple[int, ...], Optional[bool]] = {}
    for selection, flag in zip(selections, flags):
        optimal[selection] = flag if flag is None else bool(optimal.get(selection)) or flag

    points = []
    for selection, flag in optimal.items():
        points.append(ObjectivePoint(
            delta_lambda=eigen_drop(g, selection, base_lambda=ep.lambda_max, solver=solver),
            cost=int(costs[list(selection)].sum()) if selection else 0,
            method=method,
            nodes=g.labels_for(selection),
            selection=selection,
            shield_value=shield_value(ep, g, selection),
            optimal=flag,
        ))
    return nondominated_filter(points)


def epsilon_sweep(
    g: Graph,
    costs: Sequence[int],
    budgets: Sequence[int],
    *,
    workers: int = 1,
    solver: str = "power",
    method: str = "eps_qp",
    node_limit: Optional[int] = None,
) -> Front:
    """
    Solve the budgeted program for every ε on g's eigenpair and return the
    non-dominated (Δλ, cost) points, scored with true eigen-drop at actual cost.
    """
    budgets = list(budgets)
    if not budgets or min(budgets) < 0:
        raise GraphValidationError("budgets must be a nonempty sequence of nonnegative integers")
    costs = np.asarray(costs, dtype=np.int64)
    ep = principal_eigenpair(g, solver=solver)
    base = build_qp(g, ep, costs, 0)

    results = _map(_solve_selection, [(base.with_budget(eps), node_limit) for eps in budgets], workers)
    cut = sum(not optimal for _, optimal in results)
    logging.info(f"Solved {len(budgets)} budgeted programs on {g}")
    if cut:
        logging.warning(f"{cut} of {len(budgets)} budgeted programs hit the node limit")
    selections, proven = zip(*results)
    return score_selections(g, ep, costs, selections, method, solver=solver, proven=proven)


def epsilon_sweep_batched(
    g: Graph,
    costs: Sequence[int],
    b: int,
    budgets: Sequence[int],
    *,
    workers: int = 1,
    solver: str = "power",
    method: str = "eps_qp_batched",
    node_limit: Optional[int] = None,
) -> Front:
    """
    NetShield+-style sweep: per ε, repeatedly solve for at most b nodes on the
    residual graph with the remaining budget, recomputing the eigenpair after
    every batch, until a batch comes back empty or no nodes remain. Costs
    stay at their values in g.
    """
    if b < 1:
        raise GraphValidationError(f"batch size must be >= 1, got {b}")
    budgets = list(budgets)
    if not budgets or min(budgets) < 0:
        raise GraphValidationError("budgets must be a nonempty sequence of nonnegative integers")
    costs = np.asarray(costs, dtype=np.int64)
    ep = principal_eigenpair(g, solver=solver)

    results = _map(_batched_selection, [(g, costs, b, eps, solver, node_limit) for eps in budgets], workers)
    cut = sum(not optimal for _, optimal in results)
    logging.info(f"Solved {len(budgets)} batched sweeps (b={b}) on {g}")
    if cut:
        logging.warning(f"{cut} of {len(budgets)} batched sweeps hit the node limit")
    selections, proven = zip(*results)
    return score_selections(g, ep, costs, selections, method, solver=solver, proven=proven)

"""
Graph representation and spectral primitives.

Graphs are undirected, simple and immutable. Removing nodes returns a new
graph that remembers which indices of the root graph it was built from.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import scipy.linalg

from netimmune_core.lib.errors import ConvergenceError, GraphValidationError

# Index sets (lists, tuples, sets, integer arrays) or boolean masks of length n.
NodeSubset = Union[Sequence[int], Iterable[int], np.ndarray]

RAYLEIGH_TOL = 1e-12
RESIDUAL_TOL = 1e-10
MAX_ITERATIONS = 10**6
EIGEN_SOLVERS = ("power", "dense")


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Undirected simple graph backed by a dense binary adjacency matrix.

    Attributes:
        node_labels: External node names, index-aligned with the matrix
        adjacency: Symmetric 0/1 matrix with zero diagonal (read-only)
        original_index: Index of each node in the graph this one was cut from
    """
    node_labels: Tuple[str, ...]
    adjacency: np.ndarray
    original_index: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        labels = tuple(str(label) for label in self.node_labels)
        matrix = np.array(self.adjacency, dtype=np.int8, copy=True)
        n = len(labels)

        if matrix.size == 0:
            matrix = np.zeros((n, n), dtype=np.int8)
        if matrix.ndim != 2 or matrix.shape != (n, n):
            raise GraphValidationError(
                f"adjacency shape {matrix.shape} does not match {n} node labels"
            )
        if len(set(labels)) != n:
            raise GraphValidationError("node labels must be unique")
        if not np.isin(matrix, (0, 1)).all():
            raise GraphValidationError("adjacency must be binary")
        if not np.array_equal(matrix, matrix.T):
            raise GraphValidationError("adjacency must be symmetric")
        if n and np.any(np.diag(matrix)):
            raise GraphValidationError("self-loops are not allowed")

        original = tuple(self.original_index) if self.original_index else tuple(range(n))
        if len(original) != n:
            raise GraphValidationError("original_index must have one entry per node")

        matrix.setflags(write=False)
        object.__setattr__(self, "node_labels", labels)
        object.__setattr__(self, "adjacency", matrix)
        object.__setattr__(self, "original_index", original)

    @property
    def n(self) -> int:
        return len(self.node_labels)

    @cached_property
    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        degrees = self.adjacency.sum(axis=1).astype(np.int64)
        degrees.setflags(write=False)
        return degrees

    @cached_property
    def matrix(self) -> np.ndarray:
        """Float view of the adjacency matrix for linear algebra."""
        matrix = self.adjacency.astype(np.float64)
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def index_of(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.node_labels)}

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Yield each undirected edge once as (i, j) with i < j."""
        rows, cols = np.nonzero(np.triu(self.adjacency, 1))
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield i, j

    def neighbors(self, i: int) -> List[int]:
        return np.flatnonzero(self.adjacency[i]).tolist()

    def labels_for(self, nodes: NodeSubset) -> Tuple[str, ...]:
        return tuple(self.node_labels[i] for i in selection_indices(self.n, nodes))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph, labels: Optional[Sequence[str]] = None) -> "Graph":
        """Build a Graph from a networkx graph, keeping its node order."""
        nodes = list(graph.nodes())
        position = {node: i for i, node in enumerate(nodes)}
        matrix = np.zeros((len(nodes), len(nodes)), dtype=np.int8)
        for a, b in graph.edges():
            if a == b:
                raise GraphValidationError(f"self-loop on node {a!r}")
            matrix[position[a], position[b]] = 1
            matrix[position[b], position[a]] = 1
        if labels is None:
            labels = [str(node) for node in nodes]
        return cls(node_labels=tuple(labels), adjacency=matrix)

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Iterable[Tuple[int, int]]) -> "Graph":
        matrix = np.zeros((len(labels), len(labels)), dtype=np.int8)
        for i, j in edges:
            if i == j:
                raise GraphValidationError(f"self-loop on node {labels[i]!r}")
            matrix[i, j] = 1
            matrix[j, i] = 1
        return cls(node_labels=tuple(labels), adjacency=matrix)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_labels == other.node_labels and np.array_equal(
            self.adjacency, other.adjacency
        )

    def __hash__(self) -> int:
        return hash((self.node_labels, self.adjacency.tobytes()))

    def __str__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"

    def __repr__(self) -> str:
        return f"Graph(node_labels={self.node_labels[:5]}..., n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True, eq=False)
class EigenPair:
    """Principal eigenvalue and the nonnegative unit Perron eigenvector."""
    lambda_max: float
    u: np.ndarray
    iterations: int = 0

    def __post_init__(self):
        vector = np.array(self.u, dtype=np.float64, copy=True)
        vector.setflags(write=False)
        object.__setattr__(self, "u", vector)

    @property
    def n(self) -> int:
        return len(self.u)


def selection_mask(n: int, nodes: NodeSubset) -> np.ndarray:
    """
    Normalise a node subset to a boolean mask of length n.

    Boolean numpy arrays are taken as masks; anything else is read as a
    collection of node indices.
    """
    if isinstance(nodes, np.ndarray) and nodes.dtype == np.bool_:
        if nodes.shape != (n,):
            raise GraphValidationError(f"selection mask has shape {nodes.shape}, expected ({n},)")
        return nodes.copy()

    mask = np.zeros(n, dtype=bool)
    for index in nodes:
        i = int(index)
        if i < 0 or i >= n:
            raise GraphValidationError(f"node index {i} out of range for {n} nodes")
        mask[i] = True
    return mask


def selection_indices(n: int, nodes: NodeSubset) -> List[int]:
    return np.flatnonzero(selection_mask(n, nodes)).tolist()


def principal_eigenpair(g: Graph, solver: str = "power", max_iter: int = MAX_ITERATIONS) -> EigenPair:
    """
    Compute the principal eigenvalue and Perron eigenvector of g.

    The default solver runs power iteration on A + I from the uniform start
    vector. It stops once successive Rayleigh quotients agree within 1e-12 and
    the eigen-residual is below 1e-10·max(1, λ); hitting the iteration cap
    raises ConvergenceError.
    """
    if solver not in EIGEN_SOLVERS:
        raise ValueError(f"unknown eigen solver {solver!r}, expected one of {EIGEN_SOLVERS}")
    n = g.n
    if n == 0:
        return EigenPair(lambda_max=0.0, u=np.zeros(0))
    if solver == "dense":
        return _dense_eigenpair(g)
    return _power_eigenpair(g, max_iter)


def _power_eigenpair(g: Graph, max_iter: int) -> EigenPair:
    n = g.n
    shifted = g.matrix + np.eye(n)
    x = np.full(n, 1.0 / np.sqrt(n))
    y = shifted @ x
    rayleigh = float(x @ y)
    residual = float("inf")

    for iteration in range(1, max_iter + 1):
        x = y / np.linalg.norm(y)
        y = shifted @ x
        rayleigh_next = float(x @ y)
        residual = float(np.linalg.norm(y - rayleigh_next * x))
        if (
            abs(rayleigh_next - rayleigh) < RAYLEIGH_TOL
            and residual <= RESIDUAL_TOL * max(1.0, rayleigh_next - 1.0)
        ):
            u = np.maximum(x, 0.0)
            u /= np.linalg.norm(u)
            logging.debug(f"Power iteration converged after {iteration} iterations on {g}")
            return EigenPair(lambda_max=max(rayleigh_next - 1.0, 0.0), u=u, iterations=iteration)
        rayleigh = rayleigh_next

    raise ConvergenceError(max_iter, residual)


def _dense_eigenpair(g: Graph) -> EigenPair:
    n = g.n
    values, vectors = scipy.linalg.eigh(g.matrix, subset_by_index=[n - 1, n - 1])
    # |v| stays in the top eigenspace because components have disjoint supports.
    u = np.abs(vectors[:, 0])
    u /= np.linalg.norm(u)
    return EigenPair(lambda_max=max(float(values[0]), 0.0), u=u)


def remove_nodes(g: Graph, nodes: NodeSubset) -> Graph:
    """Return the subgraph induced on the nodes not in the given subset."""
    keep = ~selection_mask(g.n, nodes)
    kept = np.flatnonzero(keep)
    return Graph(
        node_labels=tuple(g.node_labels[i] for i in kept),
        adjacency=g.adjacency[np.ix_(kept, kept)],
        original_index=tuple(g.original_index[i] for i in kept),
    )


def eigen_drop(
    g: Graph,
    nodes: NodeSubset,
    *,
    base_lambda: Optional[float] = None,
    solver: str = "power",
) -> float:
    """λ(G) − λ(G∖S), clamped at zero against rounding noise."""
    mask = selection_mask(g.n, nodes)
    if not mask.any():
        return 0.0
    if base_lambda is None:
        base_lambda = principal_eigenpair(g, solver=solver).lambda_max
    remainder = principal_eigenpair(remove_nodes(g, mask), solver=solver).lambda_max
    return max(base_lambda - remainder, 0.0)


def degree_costs(g: Graph) -> np.ndarray:
    """Removal cost of each node: its degree in g."""
    return np.array(g.degrees, dtype=np.int64)


def selection_cost(costs: np.ndarray, nodes: NodeSubset) -> int:
    mask = selection_mask(len(costs), nodes)
    return int(np.asarray(costs, dtype=np.int64)[mask].sum())


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component (lowest index wins ties)."""
    if g.n == 0:
        return g
    components = sorted(
        (sorted(component) for component in nx.connected_components(g.to_networkx())),
        key=lambda component: (-len(component), component[0]),
    )
    keep = np.zeros(g.n, dtype=bool)
    keep[components[0]] = True
    if not keep.all():
        logging.warning(f"Largest component keeps {int(keep.sum())} of {g.n} nodes")
    return remove_nodes(g, ~keep)

"""
Shield-value proxy and the greedy NetShield / NetShield+ selections.
"""

import logging
from typing import List, Optional

import numpy as np

from netimmune_core.lib.errors import GraphValidationError
from netimmune_core.lib.graph import (
    EigenPair,
    Graph,
    NodeSubset,
    principal_eigenpair,
    remove_nodes,
    selection_indices,
)

TIE_TOL = 1e-12


def shield_value(ep: EigenPair, g: Graph, nodes: NodeSubset) -> float:
    """
    Sv(S) = Σ_{i∈S} 2λu_i² − Σ_{i<j∈S} 2u_iu_jA_ij.

    The pairwise term is written as u_Sᵀ A_SS u_S, which counts every
    unordered pair twice with coefficient 1.
    """
    if ep.n != g.n:
        raise GraphValidationError(f"eigenpair has length {ep.n} but graph has {g.n} nodes")
    idx = selection_indices(g.n, nodes)
    if not idx:
        return 0.0
    u = ep.u[idx]
    linear = 2.0 * ep.lambda_max * float(u @ u)
    pairwise = float(u @ g.matrix[np.ix_(idx, idx)] @ u)
    return linear - pairwise


def _lowest_argmax(scores: np.ndarray) -> int:
    best = scores.max()
    return int(np.flatnonzero(scores >= best - TIE_TOL * max(1.0, abs(best)))[0])


def netshield_greedy(g: Graph, k: int, ep: Optional[EigenPair] = None, *, solver: str = "power") -> List[int]:
    """
    Select k nodes greedily by marginal Shield-value gain.

    The eigenpair is computed once. The score of a candidate j is
    2λu_j² − 2u_j Σ_{i∈S} A_ij u_i; ties go to the lowest index. The result
    lists nodes in selection order.
    """
    if k < 0 or k > g.n:
        raise GraphValidationError(f"k must lie in [0, {g.n}], got {k}")
    if k == 0:
        return []
    if ep is None:
        ep = principal_eigenpair(g, solver=solver)

    u = ep.u
    base = 2.0 * ep.lambda_max * u * u
    coupling = np.zeros(g.n)
    taken = np.zeros(g.n, dtype=bool)
    selected: List[int] = []

    for _ in range(k):
        scores = base - 2.0 * coupling * u
        scores[taken] = -np.inf
        j = _lowest_argmax(scores)
        selected.append(j)
        taken[j] = True
        coupling += g.matrix[:, j] * u[j]

    return selected


def netshield_plus(g: Graph, k: int, b: int, *, solver: str = "power") -> List[int]:
    """
    NetShield+ : greedy batches of b nodes with eigenpair recomputation.

    Each round selects min(b, k - |S|) nodes on the residual graph, maps them
    back to indices of g and removes them before the next eigenpair.
    """
    if not (1 <= b <= k <= g.n):
        raise GraphValidationError(f"need 1 <= b <= k <= n, got b={b}, k={k}, n={g.n}")

    residual = g
    positions = list(range(g.n))
    selected: List[int] = []

    while len(selected) < k:
        batch = netshield_greedy(residual, min(b, k - len(selected)), solver=solver)
        selected.extend(positions[i] for i in batch)
        batch_set = set(batch)
        positions = [p for i, p in enumerate(positions) if i not in batch_set]
        residual = remove_nodes(residual, batch)
        logging.debug(f"NetShield+ round selected {len(batch)} node(s), {len(selected)}/{k} total")

    return selected


def batch_boundaries(k: int, b: int) -> List[int]:
    """Selection sizes at which NetShield+ finishes a round."""
    sizes = list(range(b, k, b))
    if k:
        sizes.append(k)
    return sizes

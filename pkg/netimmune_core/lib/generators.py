"""
Benchmark graph generators and the compact generator-spec grammar.

Specs are written as ``er:n:m:seed=s``, ``ba:n:attach:seed=s`` and
``barbell:c``; the seed part is optional and defaults to 0.
"""

import re
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from netimmune_core.lib.errors import ConfigError, GraphValidationError
from netimmune_core.lib.graph import Graph

_SPEC_PATTERN = re.compile(
    r"^(?P<kind>er|ba|barbell):(?P<first>\d+)(?::(?P<second>\d+))?(?::seed=(?P<seed>-?\d+))?$"
)


def generate_erdos_renyi(n: int, target_edges: int, seed: int) -> Graph:
    """G(n, m): exactly target_edges edges drawn uniformly without replacement."""
    max_edges = n * (n - 1) // 2
    if n < 0 or target_edges < 0 or target_edges > max_edges:
        raise GraphValidationError(
            f"target_edges must lie in [0, {max_edges}] for n={n}, got {target_edges}"
        )
    return Graph.from_networkx(nx.gnm_random_graph(n, target_edges, seed=seed))


def generate_barabasi_albert(n: int, attach: int, seed: int) -> Graph:
    """
    Preferential attachment grown from a complete core on attach + 1 nodes.

    Every later node links to `attach` distinct existing nodes chosen with
    probability proportional to degree, so the graph ends with
    attach·(attach+1)/2 + attach·(n − attach − 1) edges.
    """
    if attach < 1 or attach >= n:
        raise GraphValidationError(f"attach must satisfy 1 <= attach < n, got attach={attach}, n={n}")
    core = nx.complete_graph(attach + 1)
    return Graph.from_networkx(nx.barabasi_albert_graph(n, attach, seed=seed, initial_graph=core))


def generate_barbell(clique_size: int) -> Graph:
    """
    Two cliques of clique_size nodes joined through a degree-2 bridge node.

    Nodes 0..c-1 form the first clique, c..2c-1 the second and node 2c is the
    bridge, adjacent to nodes c-1 and c. Labels are 1-based.
    """
    if clique_size < 2:
        raise GraphValidationError(f"clique_size must be >= 2, got {clique_size}")
    c = clique_size
    edges = []
    for offset in (0, c):
        edges.extend((offset + i, offset + j) for i in range(c) for j in range(i + 1, c))
    bridge = 2 * c
    edges.extend([(c - 1, bridge), (c, bridge)])
    labels = [str(i + 1) for i in range(2 * c + 1)]
    return Graph.from_edges(labels, edges)


@dataclass(frozen=True)
class GeneratorSpec:
    """Parsed generator spec string."""
    kind: str
    first: int
    second: Optional[int] = None
    seed: int = 0

    def build(self) -> Graph:
        if self.kind == "er":
            return generate_erdos_renyi(self.first, self.second, self.seed)
        if self.kind == "ba":
            return generate_barabasi_albert(self.first, self.second, self.seed)
        return generate_barbell(self.first)

    def __str__(self) -> str:
        if self.kind == "barbell":
            return f"barbell:{self.first}"
        return f"{self.kind}:{self.first}:{self.second}:seed={self.seed}"


def is_generator_spec(text: str) -> bool:
    return bool(re.match(r"^(er|ba|barbell):", text.strip()))


def parse_generator_spec(text: str) -> GeneratorSpec:
    match = _SPEC_PATTERN.match(text.strip())
    if not match:
        raise ConfigError(
            f"invalid generator spec {text!r}; expected er:n:m:seed=s, ba:n:attach:seed=s or barbell:c"
        )
    kind = match.group("kind")
    second = match.group("second")
    seed = match.group("seed")
    if kind in ("er", "ba") and second is None:
        raise ConfigError(f"generator spec {text!r} needs two integer parameters")
    if kind == "barbell" and (second is not None or seed is not None):
        raise ConfigError(f"barbell spec takes a single clique size, got {text!r}")
    return GeneratorSpec(
        kind=kind,
        first=int(match.group("first")),
        second=int(second) if second is not None else None,
        seed=int(seed) if seed is not None else 0,
    )

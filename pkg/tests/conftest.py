"""
Shared graph fixtures.
"""

import networkx as nx
import pytest

from netimmune_core.lib.generators import generate_barbell
from netimmune_core.lib.graph import Graph


@pytest.fixture
def triangle():
    """Complete graph K3."""
    return Graph.from_networkx(nx.complete_graph(3))


@pytest.fixture
def star():
    """Star K1,3 with the center at index 0."""
    return Graph.from_networkx(nx.star_graph(3))


@pytest.fixture
def barbell():
    """Two K6 joined through a degree-2 bridge node (index 12, label '13')."""
    return generate_barbell(6)


@pytest.fixture
def edgeless():
    return Graph(node_labels=("a", "b", "c"), adjacency=[[0, 0, 0], [0, 0, 0], [0, 0, 0]])

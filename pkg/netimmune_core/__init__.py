"""
netimmune-core: Pareto fronts for cost-aware node immunisation

This package computes (eigen-drop, removal cost) trade-off fronts for
networks with greedy NetShield selections, an exact ε-constraint solver over
the Shield-value objective, and NSGA-II / SMS-EMOA searches.
"""

__version__ = "0.1.0"

from netimmune_core.lib import (
    Front,
    Graph,
    ObjectivePoint,
)

__all__ = [
    "Front",
    "Graph",
    "ObjectivePoint",
]

"""
Tests for the Shield-value proxy and the NetShield / NetShield+ greedy
selections.
"""

import itertools
import math

import networkx as nx
import numpy as np
import pytest

from netimmune_core.lib.errors import GraphValidationError
from netimmune_core.lib.generators import generate_barabasi_albert, generate_erdos_renyi
from netimmune_core.lib.graph import Graph, eigen_drop, principal_eigenpair
from netimmune_core.lib.shield import batch_boundaries, netshield_greedy, netshield_plus, shield_value


class TestShieldValue:
    """Shield-value on graphs with analytic eigenpairs."""

    @pytest.mark.parametrize("m", [2, 3, 5])
    def test_star_center(self, m):
        """Sv(star, {center}) = 2√m·(1/2) = √m."""
        g = Graph.from_networkx(nx.star_graph(m))
        ep = principal_eigenpair(g)

        assert shield_value(ep, g, [0]) == pytest.approx(math.sqrt(m), abs=1e-8)

    def test_triangle(self, triangle):
        """One node of K3 is worth 4/3, two nodes 8/3 − 2/3 = 2."""
        ep = principal_eigenpair(triangle)

        assert shield_value(ep, triangle, [1]) == pytest.approx(4 / 3, abs=1e-9)
        assert shield_value(ep, triangle, [0, 2]) == pytest.approx(2.0, abs=1e-9)
        assert shield_value(ep, triangle, []) == 0.0

    def test_matches_pairwise_definition(self):
        """The matrix form equals the explicit sum over selected pairs."""
        g = generate_erdos_renyi(12, 25, seed=4)
        ep = principal_eigenpair(g)
        nodes = [0, 3, 4, 7, 11]

        expected = sum(2 * ep.lambda_max * ep.u[i] ** 2 for i in nodes)
        expected -= sum(2 * ep.u[i] * ep.u[j] * g.adjacency[i, j] for i, j in itertools.combinations(nodes, 2))

        assert shield_value(ep, g, nodes) == pytest.approx(expected, abs=1e-12)

    def test_dimension_mismatch(self, triangle, star):
        with pytest.raises(GraphValidationError):
            shield_value(principal_eigenpair(star), triangle, [0])

    def test_singleton_closed_form(self, barbell):
        ep = principal_eigenpair(barbell)
        for i in range(barbell.n):
            assert shield_value(ep, barbell, [i]) == pytest.approx(2 * ep.lambda_max * ep.u[i] ** 2, abs=1e-12)

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_diminishing_gains_over_all_subsets(self, seed):
        """Marginal gains never grow with the selection and never go negative."""
        g = generate_barabasi_albert(7, 2, seed=seed)
        ep = principal_eigenpair(g)
        value = {
            mask: shield_value(ep, g, [i for i in range(g.n) if mask >> i & 1])
            for mask in range(1 << g.n)
        }

        for larger in range(1 << g.n):
            smaller = larger
            while True:
                for v in range(g.n):
                    bit = 1 << v
                    if larger & bit:
                        continue
                    small_gain = value[smaller | bit] - value[smaller]
                    large_gain = value[larger | bit] - value[larger]
                    assert small_gain >= large_gain - 1e-12, (smaller, larger, v)
                    assert large_gain >= -1e-9
                if smaller == 0:
                    break
                smaller = (smaller - 1) & larger

    @pytest.mark.parametrize("m", [3, 6])
    def test_star_center_equals_eigen_drop(self, m):
        """Removing the center empties the star, so proxy and true drop agree."""
        g = Graph.from_networkx(nx.star_graph(m))
        ep = principal_eigenpair(g)

        assert shield_value(ep, g, [0]) == pytest.approx(eigen_drop(g, [0]), abs=1e-9)

    def test_star_leaf_differs_from_eigen_drop(self, star):
        """For one leaf the proxy gives 1/√3 while λ falls from √3 to √2."""
        ep = principal_eigenpair(star)

        assert shield_value(ep, star, [1]) == pytest.approx(1 / math.sqrt(3), abs=1e-9)
        assert eigen_drop(star, [1]) == pytest.approx(math.sqrt(3) - math.sqrt(2), abs=1e-8)


class TestNetShield:
    """Greedy NetShield selection."""

    def test_k_zero(self, triangle):
        assert netshield_greedy(triangle, 0) == []

    def test_k_out_of_range(self, triangle):
        with pytest.raises(GraphValidationError):
            netshield_greedy(triangle, 4)

    def test_star_picks_center(self, star):
        assert netshield_greedy(star, 1) == [0]

    def test_barbell_picks_attachment_node(self, barbell):
        """
        On barbell(6) the bridge has the smallest Perron entry, so the
        first Shield-value pick is the lowest-index attachment node.
        """
        assert netshield_greedy(barbell, 1) == [5]

    def test_greedy_steps_match_shield_gains(self):
        """Every greedy pick maximises the Shield-value increase."""
        g = generate_erdos_renyi(15, 30, seed=2)
        ep = principal_eigenpair(g)
        selected = netshield_greedy(g, 5, ep)

        for step, node in enumerate(selected):
            prefix = selected[:step]
            current = shield_value(ep, g, prefix)
            gains = [
                shield_value(ep, g, prefix + [j]) - current if j not in prefix else -np.inf
                for j in range(g.n)
            ]
            assert gains[node] == pytest.approx(max(gains), abs=1e-10)

    def test_selection_order_is_stable(self, barbell):
        assert netshield_greedy(barbell, 4) == netshield_greedy(barbell, 4)
        assert len(set(netshield_greedy(barbell, 13))) == 13

    def test_shorter_runs_are_prefixes(self):
        g = generate_erdos_renyi(14, 30, seed=13)
        longest = netshield_greedy(g, g.n)
        for k in range(g.n):
            assert netshield_greedy(g, k) == longest[:k]


class TestNetShieldPlus:
    """NetShield+ batches with eigenpair recomputation."""

    def test_barbell_batches_of_one(self, barbell):
        """After one attachment node goes, the other one leads the residual graph."""
        assert netshield_plus(barbell, 2, 1) == [5, 6]

    def test_single_batch_equals_greedy(self):
        g = generate_erdos_renyi(20, 40, seed=5)
        assert netshield_plus(g, 6, 6) == netshield_greedy(g, 6)

    def test_complete_graph_exhausted(self):
        """Taking every node of K4 one at a time removes λ = 3 entirely."""
        g = Graph.from_networkx(nx.complete_graph(4))
        selected = netshield_plus(g, 4, 1)

        assert sorted(selected) == [0, 1, 2, 3]
        assert eigen_drop(g, selected) == pytest.approx(3.0, abs=1e-8)

    def test_indices_refer_to_input_graph(self):
        g = generate_erdos_renyi(20, 40, seed=6)
        selected = netshield_plus(g, 8, 3)

        assert len(selected) == 8
        assert len(set(selected)) == 8
        assert all(0 <= i < g.n for i in selected)

    @pytest.mark.parametrize("k,b", [(2, 3), (0, 1), (3, 0)])
    def test_invalid_parameters(self, triangle, k, b):
        with pytest.raises(GraphValidationError):
            netshield_plus(triangle, k, b)


def test_batch_boundaries():
    assert batch_boundaries(7, 3) == [3, 6, 7]
    assert batch_boundaries(6, 3) == [3, 6]
    assert batch_boundaries(0, 1) == []

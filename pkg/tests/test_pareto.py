"""
Tests for dominance, front filtering, the 2-D hypervolume and attainment
curves, and the front file formats.
"""

import json

import numpy as np
import pytest

from netimmune_core.lib.errors import FrontSchemaError
from netimmune_core.lib.pareto import (
    FRONT_COLUMNS,
    AttainmentCurve,
    Front,
    ObjectivePoint,
    dominates,
    first_attainment_curve,
    hv_contribution_2d,
    hypervolume_2d,
    nondominated_filter,
    read_front,
    read_front_csv,
    read_front_json,
    weakly_dominates,
    write_front,
    write_front_csv,
)


def _staircase_run(rng, size=8, max_cost=20):
    costs = np.sort(rng.choice(max_cost + 1, size=size, replace=False))
    heights = np.sort(rng.random(size))
    return [ObjectivePoint(delta_lambda=h, cost=int(c)) for h, c in zip(heights, costs)]


class TestDominance:
    """Strict and weak dominance under (max Δλ, min cost)."""

    def test_examples(self):
        assert dominates((2, 1), (1, 2))
        assert not dominates((1, 1), (1, 1))
        assert not dominates((1, 2), (2, 1))

    def test_tolerance_on_delta_lambda(self):
        assert not dominates((1.0 + 1e-12, 3), (1.0, 3))
        assert dominates((1.0 + 1e-12, 2), (1.0, 3))

    def test_weak(self):
        assert weakly_dominates((1, 1), (1, 1))
        assert not weakly_dominates((1, 2), (1, 1))

    def test_point_validation(self):
        with pytest.raises(ValueError):
            ObjectivePoint(delta_lambda=-0.5, cost=1)
        with pytest.raises(ValueError):
            ObjectivePoint(delta_lambda=1.0, cost=-1)
        with pytest.raises(ValueError):
            ObjectivePoint(delta_lambda=1.0, cost=1.5)

    def test_rounding_noise_clamped(self):
        assert ObjectivePoint(delta_lambda=-1e-12, cost=0).delta_lambda == 0.0


class TestNondominatedFilter:
    """Front construction."""

    def test_example(self):
        front = nondominated_filter([(0, 0), (1, 2), (1, 3)])
        assert [p.objectives for p in front] == [(0.0, 0), (1.0, 2)]

    def test_duplicates_collapse(self):
        front = nondominated_filter([(1, 2), (1, 2), (0, 0)])
        assert len(front) == 2

    def test_idempotent_and_order_invariant(self):
        rng = np.random.default_rng(1)
        points = list(zip(rng.random(200), rng.integers(0, 40, 200)))
        front = nondominated_filter(points)

        assert nondominated_filter(front) == front
        assert nondominated_filter(points[::-1]) == front

    def test_matches_quadratic_oracle(self):
        """A 1000-point cloud against an independent pairwise check."""
        rng = np.random.default_rng(7)
        points = [ObjectivePoint(delta_lambda=d, cost=int(c)) for d, c in zip(rng.random(1000), rng.integers(0, 50, 1000))]

        oracle = {
            p.objectives for p in points
            if not any(q.delta_lambda >= p.delta_lambda and q.cost <= p.cost and q.objectives != p.objectives for q in points)
        }
        assert {p.objectives for p in nondominated_filter(points)} == oracle

    def test_front_is_sorted_staircase(self):
        rng = np.random.default_rng(2)
        front = Front(zip(rng.random(300), rng.integers(0, 30, 300)))

        costs = [p.cost for p in front]
        heights = [p.delta_lambda for p in front]
        assert costs == sorted(set(costs))
        assert all(b > a for a, b in zip(heights, heights[1:]))

    def test_list_helpers(self):
        front = Front([(0, 0), (1, 2), (3, 5)])
        assert len(front.filter(lambda p: p.cost > 0)) == 2
        assert Front.from_dict_list(front.to_dict_list()) == front
        assert front.objectives().shape == (3, 2)
        assert len(front.merge([(4, 5)])) == 3


class TestHypervolume:
    """Exact sweep against oracles."""

    def test_single_rectangle(self):
        assert hypervolume_2d([(1, 1)], (0, 3)) == pytest.approx(2.0)

    def test_empty(self):
        assert hypervolume_2d([], (0, 3)) == 0.0

    def test_reference_violation(self):
        with pytest.raises(ValueError):
            hypervolume_2d([(1, 3)], (0, 3))
        with pytest.raises(ValueError):
            hypervolume_2d([(0, 1)], (0, 3))

    def test_order_and_duplicates(self):
        points = [(1, 1), (2, 3), (3, 6), (2, 3)]
        ref = (-1, 10)
        assert hypervolume_2d(points, ref) == pytest.approx(hypervolume_2d(points[::-1][1:], ref))

    def test_adding_a_point_never_decreases(self):
        rng = np.random.default_rng(4)
        ref = (-0.1, 41)
        points = []
        previous = 0.0
        for d, c in zip(rng.random(100), rng.integers(0, 40, 100)):
            points.append((d, c))
            current = hypervolume_2d(points, ref)
            assert current >= previous - 1e-12
            previous = current

    def test_integer_slab_oracle(self):
        """Integer costs split the area into unit-width slabs."""
        rng = np.random.default_rng(5)
        points = list(zip(rng.random(50) * 3, rng.integers(0, 30, 50)))
        ref = (-0.5, 35)

        expected = 0.0
        for slab in range(0, 35):
            attained = [d for d, c in points if c <= slab]
            if attained:
                expected += max(attained) - ref[0]
        assert hypervolume_2d(points, ref) == pytest.approx(expected, abs=1e-9)

    def test_monte_carlo_estimate(self):
        """50 staircase points against a 10⁶-sample estimate, within 3σ."""
        rng = np.random.default_rng(6)
        front = _staircase_run(rng, size=50, max_cost=200)
        ref = (-0.2, 210.0)
        arr = np.array([p.objectives for p in front], dtype=float)

        low = np.array([ref[0], arr[:, 1].min()])
        high = np.array([arr[:, 0].max(), ref[1]])
        box = float(np.prod(high - low))
        samples, hits = 1_000_000, 0
        for _ in range(10):
            s = low + rng.random((samples // 10, 2)) * (high - low)
            covered = (arr[None, :, 0] >= s[:, None, 0]) & (arr[None, :, 1] <= s[:, None, 1])
            hits += int(covered.any(axis=1).sum())
        p = hits / samples
        sigma = box * np.sqrt(p * (1 - p) / samples)

        assert abs(hypervolume_2d(front, ref) - box * p) <= 3 * sigma

    def test_contributions(self):
        points = [(1, 1), (2, 3), (3, 6), (0.5, 4)]
        ref = (0, 10)
        contributions = hv_contribution_2d(points, ref)
        total = hypervolume_2d(points, ref)

        for i in range(len(points)):
            rest = points[:i] + points[i + 1:]
            assert contributions[i] == pytest.approx(total - hypervolume_2d(rest, ref))
        assert contributions[3] == 0.0

    def test_duplicate_contributions_are_zero(self):
        contributions = hv_contribution_2d([(1, 1), (1, 1), (2, 4)], (0, 5))
        assert contributions[:2].tolist() == [0.0, 0.0]
        assert contributions[2] == pytest.approx(1.0)


class TestAttainment:
    """k-th attainment curves over repeated runs."""

    def test_single_run(self):
        run = [(0, 0), (1, 2), (0.5, 3)]
        curve = first_attainment_curve([run])

        assert isinstance(curve, AttainmentCurve)
        assert curve.k == 1
        assert [p.objectives for p in curve] == [(0.0, 0), (1.0, 2)]

    def test_identical_runs(self):
        run = [(0, 0), (1, 2), (2, 5)]
        first = first_attainment_curve([run, run], k=1)
        second = first_attainment_curve([run, run], k=2)
        assert [p.objectives for p in first] == [p.objectives for p in second]

    def test_k_one_is_filter_of_union(self):
        rng = np.random.default_rng(8)
        runs = [_staircase_run(rng) for _ in range(5)]
        union = nondominated_filter(p for run in runs for p in run)
        assert [p.objectives for p in first_attainment_curve(runs)] == [p.objectives for p in union]

    def test_envelope_of_two_runs(self):
        """The k=2 curve follows the worse run at every cost."""
        a = [(1, 1), (3, 4)]
        b = [(2, 2), (2.5, 5)]
        curve = first_attainment_curve([a, b], k=2)
        assert [p.objectives for p in curve] == [(1.0, 2), (2.0, 4), (2.5, 5)]

    @pytest.mark.parametrize("k", [0, 3])
    def test_invalid_k(self, k):
        with pytest.raises(ValueError):
            first_attainment_curve([[(1, 1)], [(2, 2)]], k=k)

    def test_no_runs(self):
        with pytest.raises(ValueError):
            first_attainment_curve([])

    @pytest.mark.parametrize("k", [1, 3, 5])
    def test_grid_scan_oracle(self, k):
        """A 200×200 raster: a cell is attained by the curve iff at least k runs attain it."""
        rng = np.random.default_rng(9)
        runs = [_staircase_run(rng) for _ in range(5)]
        curve = np.array([p.objectives for p in first_attainment_curve(runs, k=k)], dtype=float)

        heights = np.linspace(0.0007, 0.9993, 200)
        costs = np.linspace(-0.37, 20.63, 200)
        for d in heights:
            for c in costs:
                count = sum(any(p.delta_lambda >= d and p.cost <= c for p in run) for run in runs)
                attained = bool(np.any((curve[:, 0] >= d) & (curve[:, 1] <= c))) if len(curve) else False
                assert attained == (count >= k), (d, c)

    def test_higher_k_is_weakly_dominated(self):
        rng = np.random.default_rng(10)
        runs = [_staircase_run(rng) for _ in range(5)]
        for k in range(1, 5):
            better = first_attainment_curve(runs, k=k)
            worse = first_attainment_curve(runs, k=k + 1)
            for point in worse:
                assert any(weakly_dominates(q, point) for q in better)


class TestFrontFiles:
    """CSV and JSON front files."""

    def _front(self):
        return Front([
            ObjectivePoint(delta_lambda=0.0, cost=0, method="eps_qp"),
            ObjectivePoint(delta_lambda=0.1234567891234, cost=2, method="eps_qp", nodes=("13",), selection=(12,), shield_value=0.2),
            ObjectivePoint(delta_lambda=1.5, cost=7, method="eps_qp", nodes=("a", "b"), selection=(0, 1)),
        ])

    def test_csv_layout(self, tmp_path):
        path = tmp_path / "front.csv"
        write_front_csv(self._front(), path)
        lines = path.read_text().splitlines()

        assert lines[0] == ",".join(FRONT_COLUMNS)
        assert lines[2] == "2,0.1234567891234,eps_qp,13"
        assert lines[3] == "7,1.5,eps_qp,a;b"

    def test_csv_keeps_objectives(self, tmp_path):
        path = tmp_path / "front.csv"
        write_front_csv(self._front(), path)
        front = read_front_csv(path)

        assert [p.objectives for p in front] == [p.objectives for p in self._front()]
        assert front[2].nodes == ("a", "b")
        assert front[0].source == "front.csv"

    def test_json_keeps_provenance(self, tmp_path):
        paths = write_front(self._front(), tmp_path / "out", "front", meta={"method": "eps_qp"})
        assert [p.name for p in paths] == ["front.csv", "front.json"]

        front = read_front(paths[1])
        assert front[1].selection == (12,)
        assert front[1].shield_value == 0.2
        assert json.loads(paths[1].read_text())["meta"] == {"method": "eps_qp"}

    def test_bad_header(self, tmp_path):
        path = tmp_path / "front.csv"
        path.write_text("delta_lambda,cost\n1,2\n")
        with pytest.raises(FrontSchemaError):
            read_front_csv(path)

    def test_bad_row(self, tmp_path):
        path = tmp_path / "front.csv"
        path.write_text("cost,delta_lambda,method,nodes\nx,1.0,m,\n")
        with pytest.raises(FrontSchemaError):
            read_front_csv(path)

    def test_bad_json(self, tmp_path):
        path = tmp_path / "front.json"
        path.write_text('{"rows": []}')
        with pytest.raises(FrontSchemaError):
            read_front_json(path)

        path.write_text("{not json")
        with pytest.raises(FrontSchemaError):
            read_front_json(path)

"""
Experiment orchestration: method dispatch, repeated seeded runs, front and
manifest emission, and front comparison.
"""

import csv
import json
import logging
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from netimmune_core.lib.errors import FrontSchemaError, ValidationMismatchError
from netimmune_core.lib.graph import (
    Graph,
    degree_costs,
    eigen_drop,
    principal_eigenpair,
    selection_cost,
)
from netimmune_core.lib.models import HYBRID_METHODS, ExperimentConfig, GaConfig
from netimmune_core.lib.moea import RunResult, make_hybrid_init, run_ga
from netimmune_core.lib.pareto import (
    DL_TOL,
    Front,
    ObjectivePoint,
    first_attainment_curve,
    hypervolume_2d,
    read_front,
    write_front,
)
from netimmune_core.lib.parser import load_source
from netimmune_core.lib.qp import budget_grid, epsilon_sweep, epsilon_sweep_batched, score_selections
from netimmune_core.lib.shield import batch_boundaries, netshield_greedy, netshield_plus

GRID_WARNING_SIZE = 10**4
HYPERVOLUME_COLUMNS = ["front_a", "front_b", "hv_a", "hv_b", "hv_union", "hv_a_over_b"]


def _point_indices(g: Graph, point: ObjectivePoint) -> List[int]:
    if point.selection:
        return list(point.selection)
    missing = [label for label in point.nodes if label not in g.index_of]
    if missing:
        raise ValidationMismatchError(f"{point} references unknown nodes {missing}")
    return [g.index_of[label] for label in point.nodes]


def validate_front(g: Graph, costs: Sequence[int], front: Front, *, solver: str = "power") -> None:
    """
    Re-evaluate every point of front on g: eigen-drop must match within
    1e-9 and cost exactly.
    """
    costs = np.asarray(costs, dtype=np.int64)
    base_lambda = principal_eigenpair(g, solver=solver).lambda_max
    for point in front:
        indices = _point_indices(g, point)
        delta_lambda = eigen_drop(g, indices, base_lambda=base_lambda, solver=solver)
        cost = selection_cost(costs, indices)
        if abs(delta_lambda - point.delta_lambda) > DL_TOL or cost != point.cost:
            raise ValidationMismatchError(
                f"{point} re-evaluates to delta_lambda={delta_lambda!r}, cost={cost}"
            )


def _versions() -> Dict[str, str]:
    from netimmune_core import __version__

    versions = {"netimmune-core": __version__, "python": platform.python_version()}
    for package in ("numpy", "scipy", "networkx", "pydantic"):
        try:
            versions[package] = version(package)
        except PackageNotFoundError:
            versions[package] = "unknown"
    return versions


def prefix_front(g: Graph, costs: np.ndarray, order: Sequence[int], sizes: Sequence[int], method: str, solver: str) -> Front:
    """Front of the selection prefixes order[:s] for s in sizes, plus the empty selection."""
    ep = principal_eigenpair(g, solver=solver)
    selections = [tuple(sorted(order[:size])) for size in [0, *sizes]]
    return score_selections(g, ep, costs, selections, method, solver=solver)


def _deterministic_front(config: ExperimentConfig, g: Graph, costs: np.ndarray, grid: List[int]) -> Front:
    solver = config.eigen_solver
    if config.method == "netshield":
        order = netshield_greedy(g, config.k, solver=solver)
        return prefix_front(g, costs, order, range(1, config.k + 1), "netshield", solver)
    if config.method == "netshield_plus":
        b = config.batch[0]
        order = netshield_plus(g, config.k, b, solver=solver)
        return prefix_front(g, costs, order, batch_boundaries(config.k, b), "netshield_plus", solver)
    if config.method == "eps_qp":
        return epsilon_sweep(g, costs, grid, workers=config.workers, solver=solver, node_limit=config.node_limit)
    return _batched_fronts(config, g, costs, grid)


def _batched_fronts(config: ExperimentConfig, g: Graph, costs: np.ndarray, grid: List[int]) -> Front:
    merged = Front()
    for b in config.batch:
        front = epsilon_sweep_batched(
            g, costs, b, grid, workers=config.workers, solver=config.eigen_solver, node_limit=config.node_limit
        )
        logging.info(f"Batched sweep b={b}: {len(front)} front points")
        merged = merged.merge(front)
    return merged


def _stochastic_run(
    g: Graph,
    costs: np.ndarray,
    ga_config: GaConfig,
    init: Optional[np.ndarray],
    method: str,
    run_index: int,
    solver: str,
) -> RunResult:
    started = time.perf_counter()
    result = run_ga(g, costs, ga_config, init, method=method, run=run_index, solver=solver)
    logging.info(
        f"Run {run_index} (seed {ga_config.seed}) finished in {time.perf_counter() - started:.2f}s "
        f"with {len(result.archive)} front points"
    )
    return result


def _init_fronts(config: ExperimentConfig, g: Graph, costs: np.ndarray, grid: List[int]) -> List[Front]:
    if config.method not in HYBRID_METHODS:
        return []
    sweep = epsilon_sweep(
        g, costs, grid, workers=config.workers, solver=config.eigen_solver, node_limit=config.node_limit
    )
    return [sweep, _batched_fronts(config, g, costs, grid)]


def _stochastic_runs(config: ExperimentConfig, g: Graph, costs: np.ndarray, init_fronts: List[Front]) -> List[RunResult]:
    arguments = []
    for run_index in range(config.runs):
        ga_config = config.ga_config(run_index)
        init = make_hybrid_init(init_fronts, ga_config.population_size, g, ga_config.seed) if init_fronts else None
        arguments.append((g, costs, ga_config, init, config.method, run_index, config.eigen_solver))

    if config.workers > 1 and config.runs > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(_stochastic_run, *zip(*arguments)))
    return [_stochastic_run(*args) for args in arguments]


def _write_trace(trace: List[float], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["step", "hypervolume"])
        for step, value in enumerate(trace):
            writer.writerow([step, repr(value)])


def run_experiment(config: ExperimentConfig) -> Dict[str, Any]:
    """
    Execute config and write its artifacts under config.out.

    Deterministic methods write front.csv/json. Stochastic methods write
    run_<i>/front.csv/json per repetition (seed = config.seed + i) and the
    first attainment curve as attainment.csv/json. A manifest.json records
    the configuration, versions, timings and input graph statistics, and
    counts the exact-solver points cut short by config.node_limit.
    Returns the manifest.
    """
    started = time.perf_counter()
    g = load_source(config.graph, largest_component_only=config.largest_component)
    costs = degree_costs(g)
    lambda_max = principal_eigenpair(g, solver=config.eigen_solver).lambda_max
    logging.info(f"Loaded {g} with lambda_max={lambda_max:.6f}")

    grid = budget_grid(costs, config.eps_max, config.eps_stride)
    uses_grid = config.method in ("eps_qp", "eps_qp_batched", "hybrid_nsga2", "hybrid_sms")
    if uses_grid and len(grid) * max(len(config.batch), 1) > GRID_WARNING_SIZE:
        logging.warning(f"Budget grid has {len(grid)} values; consider --eps-stride")

    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    files: List[str] = []
    seeds: List[int] = []
    meta = {"method": config.method, "graph": config.graph}

    cut_points = 0
    if config.stochastic:
        init_fronts = _init_fronts(config, g, costs, grid)
        cut_points = sum(p.optimal is False for front in init_fronts for p in front)
        results = _stochastic_runs(config, g, costs, init_fronts)
        for run_index, result in enumerate(results):
            validate_front(g, costs, result.archive, solver=config.eigen_solver)
            run_dir = out / f"run_{run_index}"
            seed = config.seed + run_index
            seeds.append(seed)
            files += [str(p) for p in write_front(result.archive, run_dir, "front", {**meta, "run": run_index, "seed": seed})]
            if result.trace:
                _write_trace(result.trace, run_dir / "trace.csv")
                files.append(str(run_dir / "trace.csv"))
        curve = first_attainment_curve([result.archive for result in results], k=1)
        files += [str(p) for p in write_front(curve, out, "attainment", {**meta, "k": curve.k, "runs": config.runs})]
    else:
        front = _deterministic_front(config, g, costs, grid)
        cut_points = sum(p.optimal is False for p in front)
        validate_front(g, costs, front, solver=config.eigen_solver)
        files += [str(p) for p in write_front(front, out, "front", meta)]
        logging.info(f"{config.method} produced {len(front)} front points")

    manifest = {
        "config": json.loads(config.model_dump_json()),
        "versions": _versions(),
        "graph": {"n": g.n, "edges": g.edge_count, "lambda_max": lambda_max},
        "eps_grid": {
            "start": grid[0],
            "stop": grid[-1],
            "stride": config.eps_stride,
            "count": len(grid),
        },
        "seeds": seeds,
        "non_optimal_points": cut_points,
        "files": files,
        "elapsed_seconds": round(time.perf_counter() - started, 3),
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    logging.info(f"Wrote {len(files)} files and manifest.json to {out}")
    return manifest


def shared_reference_point(fronts: Sequence[Front]) -> Tuple[float, float]:
    """Reference point strictly worse than every point of every front."""
    points = [p for front in fronts for p in front]
    best = max((p.delta_lambda for p in points), default=0.0)
    worst_cost = max((p.cost for p in points), default=0)
    return -0.05 * max(best, 1.0), float(worst_cost) + 1.0


def compare_fronts(paths: Sequence[Union[str, Path]], out: Union[str, Path]) -> Front:
    """
    Merge front files into one non-dominated front and tabulate pairwise
    hypervolumes against a shared reference point.

    Writes merged.csv/json and hypervolume.csv/json into out. Every merged
    point keeps its method tag and the path of the file it came from.
    """
    if not paths:
        raise FrontSchemaError("compare_fronts needs at least one front file")
    names = [str(path) for path in paths]
    fronts = [
        Front(point.with_provenance(source=name) for point in read_front(path))
        for name, path in zip(names, paths)
    ]
    merged = Front()
    for front in fronts:
        merged = merged.merge(front)

    ref = shared_reference_point(fronts)
    volumes = [hypervolume_2d(front, ref) for front in fronts]
    rows = []
    for a, front_a in enumerate(fronts):
        for b, front_b in enumerate(fronts):
            union = hypervolume_2d(front_a.merge(front_b), ref)
            rows.append({
                "front_a": names[a],
                "front_b": names[b],
                "hv_a": volumes[a],
                "hv_b": volumes[b],
                "hv_union": union,
                "hv_a_over_b": union - volumes[b],
            })

    out = Path(out)
    write_front(merged, out, "merged", {"inputs": names, "reference_point": list(ref)})
    with open(out / "hypervolume.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=HYPERVOLUME_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: repr(value) if isinstance(value, float) else value for key, value in row.items()})
    with open(out / "hypervolume.json", "w", encoding="utf-8") as f:
        json.dump({"reference_point": list(ref), "rows": rows}, f, indent=2, sort_keys=True)
        f.write("\n")
    logging.info(f"Merged {len(fronts)} fronts into {len(merged)} points")
    return merged

"""
Single entry point for graph ingestion.

Edge lists hold one undirected edge per line as two whitespace-separated
labels. Lines starting with '#' and blank lines are ignored.
"""

import io
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Tuple, Union

from netimmune_core.lib.errors import ConfigError, GraphParseError, GraphValidationError
from netimmune_core.lib.generators import is_generator_spec, parse_generator_spec
from netimmune_core.lib.graph import Graph, largest_component

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# Bundled datasets: name -> (file name, expected nodes, expected edges)
DATASETS: Dict[str, Tuple[str, int, int]] = {
    "pandemic": ("pandemic.edges", 27, 93),
    "conference1": ("conference_day1.edges", 190, 703),
}


def load_edge_list(
    source: Union[str, TextIO, Iterable[str]],
    *,
    comment: str = "#",
    largest_component_only: bool = False,
) -> Graph:
    """
    Parse an edge list into a Graph.

    Node indices follow first appearance. Duplicate edges (in either
    direction) collapse into one; self-loops are rejected.
    """
    lines = io.StringIO(source) if isinstance(source, str) else source

    labels: List[str] = []
    index: Dict[str, int] = {}
    edges = set()

    for line_number, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith(comment):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(
                f"expected two node labels, found {len(parts)} field(s): {line[:60]!r}",
                line_number,
            )
        a, b = parts
        if a == b:
            raise GraphValidationError(f"line {line_number}: self-loop on node {a!r}")
        for label in (a, b):
            if label not in index:
                index[label] = len(labels)
                labels.append(label)
        i, j = index[a], index[b]
        edges.add((min(i, j), max(i, j)))

    if not edges:
        raise GraphParseError("edge list contains no edges")

    graph = Graph.from_edges(labels, sorted(edges))
    logging.info(f"Parsed edge list: {graph.n} nodes, {graph.edge_count} edges")
    if largest_component_only:
        graph = largest_component(graph)
    return graph


def load_graph_file(path: Union[str, Path], *, largest_component_only: bool = False) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return load_edge_list(f, largest_component_only=largest_component_only)


def dataset_path(name: str) -> Path:
    if name not in DATASETS:
        raise KeyError(f"unknown dataset {name!r}; known: {sorted(DATASETS)}")
    return DATA_DIR / DATASETS[name][0]


def load_source(source: str, *, largest_component_only: bool = False) -> Graph:
    """
    Load a graph from a generator spec, a bundled dataset name or a file path.
    """
    if is_generator_spec(source):
        spec = parse_generator_spec(source)
        logging.info(f"Generating graph from spec {spec}")
        graph = spec.build()
        return largest_component(graph) if largest_component_only else graph
    if source in DATASETS:
        path = dataset_path(source)
        if not path.exists():
            raise ConfigError(
                f"dataset {source!r} is not installed: place its edge list at {path} (see {DATA_DIR / 'README.md'})"
            )
        return load_graph_file(path, largest_component_only=largest_component_only)
    return load_graph_file(source, largest_component_only=largest_component_only)


def write_edge_list(g: Graph, target: Union[str, Path, TextIO], header: Optional[str] = None) -> None:
    """Write g as an edge list; isolated nodes are not representable and are dropped."""
    isolated = int((g.degrees == 0).sum())
    if isolated:
        logging.warning(f"Edge list drops {isolated} isolated node(s)")

    def _write(f: TextIO) -> None:
        if header:
            for header_line in header.splitlines():
                f.write(f"# {header_line}\n")
        f.write(f"# nodes {g.n} edges {g.edge_count}\n")
        for i, j in g.edges():
            f.write(f"{g.node_labels[i]} {g.node_labels[j]}\n")

    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8") as f:
            _write(f)
    else:
        _write(target)

"""
Front serialisation: CSV with header ``cost,delta_lambda,method,nodes`` and a
JSON mirror that keeps the full provenance of every point.
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from netimmune_core.lib.errors import FrontSchemaError
from netimmune_core.lib.pareto.front import Front
from netimmune_core.lib.pareto.objects import ObjectivePoint

FRONT_COLUMNS = ["cost", "delta_lambda", "method", "nodes"]
NODE_SEPARATOR = ";"


def write_front_csv(front: Front, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(FRONT_COLUMNS)
        for point in front:
            if any(NODE_SEPARATOR in label for label in point.nodes):
                raise FrontSchemaError(f"node label containing {NODE_SEPARATOR!r} cannot be written")
            writer.writerow([
                point.cost,
                repr(point.delta_lambda),
                point.method,
                NODE_SEPARATOR.join(point.nodes),
            ])


def read_front_csv(path: Union[str, Path]) -> Front:
    points: List[ObjectivePoint] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != FRONT_COLUMNS:
            raise FrontSchemaError(f"{path}: expected header {','.join(FRONT_COLUMNS)}, got {header}")
        for line_number, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(FRONT_COLUMNS):
                raise FrontSchemaError(f"{path}: line {line_number} has {len(row)} fields")
            cost, delta_lambda, method, nodes = row
            try:
                points.append(ObjectivePoint(
                    delta_lambda=float(delta_lambda),
                    cost=int(cost),
                    method=method,
                    nodes=tuple(nodes.split(NODE_SEPARATOR)) if nodes else (),
                    source=Path(path).name,
                ))
            except ValueError as e:
                raise FrontSchemaError(f"{path}: line {line_number}: {e}") from e
    return Front(points)


def write_front_json(front: Front, path: Union[str, Path], meta: Optional[Dict[str, Any]] = None) -> None:
    document: Dict[str, Any] = {"points": front.to_dict_list()}
    if meta:
        document["meta"] = meta
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2, sort_keys=True)
        f.write("\n")


def read_front_json(path: Union[str, Path]) -> Front:
    with open(path, "r", encoding="utf-8") as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as e:
            raise FrontSchemaError(f"{path}: invalid JSON: {e}") from e
    if not isinstance(document, dict) or not isinstance(document.get("points"), list):
        raise FrontSchemaError(f"{path}: expected an object with a 'points' list")
    try:
        points = [ObjectivePoint.from_dict(d) for d in document["points"]]
    except (KeyError, TypeError, ValueError) as e:
        raise FrontSchemaError(f"{path}: malformed point record: {e}") from e
    source = Path(path).name
    return Front(p if p.source else p.with_provenance(source=source) for p in points)


def read_front(path: Union[str, Path]) -> Front:
    """Read a front file, choosing the format by suffix."""
    if Path(path).suffix.lower() == ".json":
        return read_front_json(path)
    return read_front_csv(path)


def write_front(front: Front, directory: Union[str, Path], stem: str, meta: Optional[Dict[str, Any]] = None) -> List[Path]:
    """Write stem.csv and stem.json into directory and return both paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    csv_path = directory / f"{stem}.csv"
    json_path = directory / f"{stem}.json"
    write_front_csv(front, csv_path)
    write_front_json(front, json_path, meta)
    return [csv_path, json_path]

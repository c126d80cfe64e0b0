"""
Reads and writes the versioned JSON artifacts: instances, arrays, point sets,
colorings and reports.

Rationals are written as strings ("3", "1/2") so that no JSON reader turns
them into floats. Integers are accepted on input.
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from linecolor.lib import FORMAT_VERSION, atomic_write, format_rational, parse_rational
from linecolor.model import Coloring, LineColorError, PointSet, RestrictionArray

PathLike = Union[str, Path]


class SchemaError(LineColorError):
    def __init__(self, field: str, msg: str) -> None:
        super().__init__(f"{field}: {msg}" if field else msg)
        self.field = field


def parse_json_rational(value: Any, field: str) -> Fraction:
    try:
        return parse_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as ex:
        raise SchemaError(field, str(ex)) from None


def _int(data: Dict[str, Any], key: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(key, f"expected an integer, got {value!r}")
    return value


def _check_format(data: Any) -> Dict[str, Any]:
    if not isinstance(data, dict):
        raise SchemaError("", "top level must be a JSON object")
    version = data.get("format", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise SchemaError("format", f"unsupported format version {version!r}")
    return data


def array_from_json(data: Dict[str, Any]) -> RestrictionArray:
    data = _check_format(data)
    k = _int(data, "k")
    m = _int(data, "m")
    entries = data.get("entries", [])
    if not isinstance(entries, list) or len(entries) != k:
        raise SchemaError("entries", f"expected a list of {k} rows")
    rows = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != m:
            raise SchemaError(f"entries[{i}]", f"expected a list of {m} entries")
        rows.append(tuple(parse_json_rational(v, f"entries[{i}][{j}]") for j, v in enumerate(row)))
    try:
        return RestrictionArray(k, m, tuple(rows))
    except ValueError as ex:
        raise SchemaError("entries", str(ex)) from None


def points_from_json(data: Dict[str, Any]) -> PointSet:
    data = _check_format(data)
    points = data.get("points")
    if not isinstance(points, list):
        raise SchemaError("points", "expected a list")
    values = [parse_json_rational(v, f"points[{i}]") for i, v in enumerate(points)]
    if len(set(values)) != len(values):
        raise SchemaError("points", "points must be distinct")
    return PointSet.of(values)


def instance_from_json(data: Dict[str, Any]) -> Tuple[RestrictionArray, PointSet]:
    return array_from_json(data), points_from_json(data)


def coloring_from_json(data: Dict[str, Any]) -> Coloring:
    data = _check_format(data)
    colors = data.get("colors")
    if not isinstance(colors, dict):
        raise SchemaError("colors", "expected an object mapping points to colors")
    assignment = {}
    for key, value in colors.items():
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(f"colors[{key!r}]", f"expected an integer, got {value!r}")
        assignment[parse_json_rational(key, f"colors[{key!r}]")] = value
    return Coloring(assignment)


def array_to_json(D: RestrictionArray) -> Dict[str, Any]:
    return {
        "format": FORMAT_VERSION,
        "k": D.k,
        "m": D.m,
        "entries": [[format_rational(e) for e in row] for row in D.rows],
    }


def points_to_json(S: PointSet) -> Dict[str, Any]:
    return {"format": FORMAT_VERSION, "points": [format_rational(x) for x in S]}


def instance_to_json(D: RestrictionArray, S: PointSet) -> Dict[str, Any]:
    data = array_to_json(D)
    data["points"] = points_to_json(S)["points"]
    return data


def coloring_to_json(T: Coloring) -> Dict[str, Any]:
    return {
        "format": FORMAT_VERSION,
        "colors": {format_rational(x): T[x] for x in sorted(T.assignment)},
    }


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def load(path: PathLike) -> Dict[str, Any]:
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as ex:
        raise SchemaError("", f"{path}: line {ex.lineno} column {ex.colno}: {ex.msg}") from None
    return _check_format(data)


def save(data: Any, path: Optional[PathLike]) -> str:
    """Writes `data` atomically to `path` (if given) and returns the text."""
    text = dumps(data)
    if path is not None:
        atomic_write(path, text)
    return text

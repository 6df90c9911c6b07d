"""
Newline-delimited JSON curve datasets.

The first record is a header {"d": <dimension>, "name": <optional str>};
every following record is {"id": <int>, "vertices": [[x, y, ...], ...]}.
Floats are written with Python's shortest round-trip repr, so a written
dataset parses back to identical doubles.
"""

import json
import math

import numpy as np

from core.errors import DatasetError, ParameterError
from core.geometry import CurveSet, PolygonalCurve


def _header(record, line):
    if not isinstance(record, dict) or "d" not in record:
        raise DatasetError("first record must be a header with a 'd' field", line)
    d = record["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise DatasetError(f"dimension must be a positive integer, got {d!r}", line)
    name = record.get("name")
    if name is not None and not isinstance(name, str):
        raise DatasetError("header 'name' must be a string", line)
    return {"d": d, "name": name}


def _curve(record, d, line):
    if not isinstance(record, dict):
        raise DatasetError("record must be an object", line)
    cid = record.get("id")
    if not isinstance(cid, int) or isinstance(cid, bool):
        raise DatasetError(f"record id must be an integer, got {cid!r}", line)
    vertices = record.get("vertices")
    if not isinstance(vertices, list) or not vertices:
        raise DatasetError("record needs a non-empty 'vertices' list", line)
    for v in vertices:
        if not isinstance(v, list) or len(v) != d:
            raise DatasetError(f"every vertex must be a list of {d} numbers", line)
        for x in v:
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                raise DatasetError(f"vertex coordinate {x!r} is not a finite number", line)
    return cid, PolygonalCurve(np.array(vertices, dtype=np.float64))


def parse_lines(lines):
    """(CurveSet, header) from an iterable of text lines."""
    header = None
    ids, curves, seen = [], [], set()
    for number, text in enumerate(lines, start=1):
        if not text.strip():
            continue
        try:
            record = json.loads(text)
        except json.JSONDecodeError as e:
            raise DatasetError(f"invalid JSON: {e.msg}", number) from e
        if header is None:
            header = _header(record, number)
            continue
        cid, curve = _curve(record, header["d"], number)
        if cid in seen:
            raise DatasetError(f"duplicate id {cid}", number)
        seen.add(cid)
        ids.append(cid)
        curves.append(curve)
    if header is None:
        raise DatasetError("dataset is empty")
    return CurveSet(curves, ids), header


def format_lines(t, name=None, d=None):
    d = d if d is not None else t.dimension
    if d is None:
        raise ParameterError("The dimension of an empty dataset must be given.")
    header = {"d": int(d)}
    if name is not None:
        header["name"] = name
    yield json.dumps(header)
    for cid, curve in zip(t.ids, t.curves):
        yield json.dumps({"id": int(cid), "vertices": curve.to_list()})


def read_dataset(path):
    with open(path, 'r') as f:
        return parse_lines(f)


def write_dataset(path, t, name=None, d=None):
    with open(path, 'w') as f:
        for line in format_lines(t, name, d):
            f.write(line + "\n")

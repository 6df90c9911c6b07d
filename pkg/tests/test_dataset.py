import json

import numpy as np
import pytest

from core.dataset import format_lines, parse_lines, read_dataset, write_dataset
from core.errors import DatasetError, ParameterError
from core.geometry import CurveSet, PolygonalCurve

header = json.dumps({"d": 2, "name": "demo"})


def record(cid, vertices):
    return json.dumps({"id": cid, "vertices": vertices})


def test_parse_lines():
    t, meta = parse_lines([header, record(7, [[0, 0], [1, 0.5]]), "", record(3, [[2, 2]])])
    assert meta == {"d": 2, "name": "demo"}
    assert t.ids == (7, 3)
    assert t[0] == PolygonalCurve([(0, 0), (1, 0.5)])
    assert len(t[1]) == 1


def test_header_only_is_an_empty_set():
    t, meta = parse_lines(['{"d": 3}'])
    assert len(t) == 0 and meta["name"] is None


@pytest.mark.parametrize(
    "lines, line",
    [
        ([], None),
        (["not json"], 1),
        (['{"name": "x"}'], 1),
        (['{"d": 0}'], 1),
        ([header, "{broken"], 2),
        ([header, record(1, [[0, 0]]), record(1, [[1, 1]])], 3),
        ([header, record(1, [[0, 0, 0]])], 2),
        ([header, record("a", [[0, 0]])], 2),
        ([header, record(1, [])], 2),
        ([header, '{"id": 1, "vertices": [[0, NaN]]}'], 2),
        ([header, record(1, [[0, True]])], 2),
    ],
)
def test_malformed_lines(lines, line):
    with pytest.raises(DatasetError) as info:
        parse_lines(lines)
    assert info.value.line == line
    if line is not None:
        assert str(info.value).startswith(f"line {line}:")


def test_write_then_read_keeps_exact_doubles(tmp_path):
    rng = np.random.default_rng(0)
    t = CurveSet([PolygonalCurve(rng.normal(size=(4, 3))) for _ in range(5)], ids=[10, 11, 12, 20, 30])
    path = tmp_path / "curves.jsonl"
    write_dataset(path, t, name="random")
    back, meta = read_dataset(path)
    assert meta == {"d": 3, "name": "random"}
    assert back.ids == t.ids
    assert all(np.array_equal(a.vertices, b.vertices) for a, b in zip(back, t))
    assert path.read_text().count("\n") == 6


def test_format_lines_needs_dimension_for_empty_set():
    with pytest.raises(ParameterError):
        list(format_lines(CurveSet([])))
    assert list(format_lines(CurveSet([]), d=2)) == ['{"d": 2}']

import hypothesis as hyp
import numpy as np
import pytest

from core.errors import ParameterError
from core.frechet import frechet_distance
from core.geometry import PolygonalCurve
from core.oracle import vertex_restricted_optimum
from core.simplify import APPROXIMATION_FACTOR, simplify
from strategies import curves


def test_collinear_curve_collapses_to_segment():
    result = simplify(PolygonalCurve([(0, 0), (1, 0), (2, 0), (3, 0)]), 2)
    assert result.curve.to_list() == [[0.0, 0.0], [3.0, 0.0]]
    assert result.indices == (0, 3)
    assert result.error <= 1e-8


def test_short_curve_is_returned_unchanged():
    t = PolygonalCurve([(0, 0), (1, 2), (3, 1)])
    result = simplify(t, 3)
    assert result.curve == t
    assert result.error == 0.0


def test_zigzag_to_segment():
    t = PolygonalCurve([(0, 0), (1, 1), (2, 0), (3, 1), (4, 0)])
    result = simplify(t, 2)
    assert result.curve.to_list() == [[0.0, 0.0], [4.0, 0.0]]
    assert result.error == pytest.approx(1.0, rel=1e-8)
    # the best 2-vertex curve is the segment at height 0.5
    assert result.error <= APPROXIMATION_FACTOR * 0.5


def test_zigzag_with_three_vertices():
    t = PolygonalCurve([(0, 0), (1, 1), (2, 0), (3, 1), (4, 0)])
    result = simplify(t, 3)
    assert len(result.curve) <= 3
    assert result.indices[0] == 0 and result.indices[-1] == 4
    assert result.error <= APPROXIMATION_FACTOR * vertex_restricted_optimum(t, 3) + 1e-6


def test_rejects_small_l():
    with pytest.raises(ParameterError):
        simplify(PolygonalCurve([(0, 0), (1, 1)]), 1)


@hyp.settings(max_examples=25, deadline=None)
@hyp.given(curves(min_vertices=2, max_vertices=6))
def test_simplification_properties(t):
    l = 3
    result = simplify(t, l)
    idx = result.indices
    assert len(result.curve) <= l
    assert idx[0] == 0 and idx[-1] == len(t) - 1
    assert list(idx) == sorted(set(idx))
    assert np.array_equal(result.curve.vertices, t.vertices[list(idx)])
    assert result.error == pytest.approx(frechet_distance(t, result.curve), abs=1e-7)
    assert result.error <= APPROXIMATION_FACTOR * vertex_restricted_optimum(t, l) + 1e-6

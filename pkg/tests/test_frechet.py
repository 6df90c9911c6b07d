import hypothesis as hyp
import hypothesis.strategies as hys
import numpy as np
import pytest

from core.errors import ParameterError
from core.frechet import FrechetConfig, decide_frechet, frechet_distance, matching_path
from core.geometry import PolygonalCurve, segment
from core.oracle import densify, discrete_frechet
from strategies import curves, unit_curve

TOL = 1e-6

flat = PolygonalCurve([(0, 0), (2, 0)])
tent = PolygonalCurve([(0, 0), (1, 1), (2, 0)])


def test_decide_identity_at_zero():
    assert decide_frechet(tent, tent, 0.0)


def test_decide_parallel_segments():
    a, b = segment((0, 0), (1, 0)), segment((0, 1), (1, 1))
    assert decide_frechet(a, b, 1.0)
    assert not decide_frechet(a, b, 0.999)


def test_decide_tent():
    assert decide_frechet(flat, tent, 1.0)
    assert not decide_frechet(flat, tent, 0.5)


def test_decide_rejects_negative_radius():
    with pytest.raises(ParameterError):
        decide_frechet(flat, tent, -1.0)


def test_distance_examples():
    assert frechet_distance(tent, tent) <= 1e-9
    assert frechet_distance(flat, tent) == pytest.approx(1.0, rel=1e-9)
    shifted = PolygonalCurve(tent.vertices + np.array([3.0, 4.0]))
    assert frechet_distance(tent, shifted) == pytest.approx(5.0, rel=1e-9)


def test_distance_needs_backtracking_free_path():
    # the leash must wait on the long detour of b
    a = PolygonalCurve([(0, 0), (4, 0)])
    b = PolygonalCurve([(0, 0), (3, 0), (1, 0), (4, 0)])
    assert frechet_distance(a, b) == pytest.approx(1.0, rel=1e-8)


def test_point_curves():
    p = PolygonalCurve([(0, 0)])
    assert frechet_distance(p, tent) == pytest.approx(2.0)
    assert frechet_distance(tent, p) == pytest.approx(2.0)
    assert decide_frechet(p, PolygonalCurve([(0, 1)]), 1.0)


def test_config_validation():
    with pytest.raises(ParameterError):
        FrechetConfig(abs_tol=0.0, rel_tol=0.0)
    with pytest.raises(ParameterError):
        FrechetConfig(abs_tol=-1.0)
    loose = FrechetConfig(abs_tol=1e-3, rel_tol=0.0)
    assert frechet_distance(flat, tent, loose) == pytest.approx(1.0, abs=1e-3)


@hyp.settings(max_examples=30, deadline=None)
@hyp.given(curves(max_vertices=5), curves(max_vertices=5), hys.floats(min_value=0.0, max_value=1.0))
def test_decision_monotone_and_consistent(a, b, frac):
    d = frechet_distance(a, b)
    assert decide_frechet(a, b, d)
    assert decide_frechet(a, b, d * (1 + frac) + 1e-9)
    if d > 1e-3:
        assert not decide_frechet(a, b, d * (1 - 1e-3))


@hyp.settings(max_examples=30, deadline=None)
@hyp.given(curves(max_vertices=5), curves(max_vertices=5))
def test_symmetry(a, b):
    assert frechet_distance(a, b) == pytest.approx(frechet_distance(b, a), rel=1e-8, abs=1e-7)


@hyp.settings(max_examples=20, deadline=None)
@hyp.given(curves(max_vertices=4), curves(max_vertices=4), curves(max_vertices=4))
def test_triangle_inequality(a, b, c):
    assert frechet_distance(a, c) <= frechet_distance(a, b) + frechet_distance(b, c) + 1e-6


@hyp.settings(max_examples=30, deadline=None)
@hyp.given(curves(min_vertices=2, max_vertices=5), curves(max_vertices=5), hys.floats(min_value=0.1, max_value=0.9))
def test_collinear_vertex_insertion(a, b, s):
    p = a.vertices[0] + s * (a.vertices[1] - a.vertices[0])
    longer = PolygonalCurve(np.insert(a.vertices, 1, p, axis=0))
    assert frechet_distance(longer, b) == pytest.approx(frechet_distance(a, b), abs=1e-6)


@hyp.settings(max_examples=25, deadline=None)
@hyp.given(curves(min_vertices=2, max_vertices=5), curves(min_vertices=2, max_vertices=5))
def test_matching_path_realises_distance(a, b):
    d = frechet_distance(a, b)
    path = matching_path(a, b, d)
    assert path is not None
    assert path[0] == (0.0, 0.0)
    assert path[-1] == (float(len(a) - 1), float(len(b) - 1))
    xs, ys = np.array(path).T
    assert np.all(np.diff(xs) >= -1e-12) and np.all(np.diff(ys) >= -1e-12)
    for x, y in path:
        assert np.linalg.norm(a.point_at(x) - b.point_at(y)) <= d + 1e-6


def test_matching_path_none_below_distance():
    assert matching_path(flat, tent, 0.5) is None


def test_discrete_frechet_sandwich():
    rng = np.random.default_rng(11)
    h = 0.01
    for _ in range(20):
        a = unit_curve(rng, int(rng.integers(2, 6)))
        b = unit_curve(rng, int(rng.integers(2, 6)))
        d = frechet_distance(a, b)
        dd = discrete_frechet(densify(a, h), densify(b, h))
        assert dd - h - TOL <= d <= dd + TOL

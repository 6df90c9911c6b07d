import hypothesis.strategies as hys
import numpy as np

from core.geometry import PolygonalCurve

coordinates = hys.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


@hys.composite
def points(draw, d=2):
    return np.array(draw(hys.lists(coordinates, min_size=d, max_size=d)))


@hys.composite
def curves(draw, min_vertices=1, max_vertices=6, d=2):
    """Curves whose consecutive vertices are at least 1e-3 apart."""
    m = draw(hys.integers(min_value=min_vertices, max_value=max_vertices))
    verts = [draw(points(d))]
    while len(verts) < m:
        v = draw(points(d))
        if np.linalg.norm(v - verts[-1]) < 1e-3:
            v = v + 1.0
        verts.append(v)
    return PolygonalCurve(np.array(verts))


def unit_curve(rng, m, d=2):
    return PolygonalCurve(rng.uniform(0.0, 1.0, size=(m, d)))

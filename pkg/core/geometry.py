"""
Points, polygonal curves, balls and grid covers.

Points are 1-d float64 numpy arrays. A curve stores its vertices as a
read-only (m, d) array; the parameter of a curve runs over [0, m-1] with
vertex i at parameter i.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from core.errors import ParameterError, ResourceError

DEFAULT_MAX_CELLS = 10**7

# Relative slack for the collinearity test in normalize_curve.
COLLINEAR_TOL = 1e-12


def as_point(coords):
    """Validate and convert coordinates to a float64 vector."""
    p = np.asarray(coords, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ParameterError("A point needs a non-empty coordinate vector.")
    if not np.all(np.isfinite(p)):
        raise ParameterError("Point coordinates must be finite.")
    return p


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not self.radius >= 0:
            raise ParameterError(f"Ball radius must be non-negative, got {self.radius}.")
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True, eq=False)
class PolygonalCurve:
    """A piecewise-linear curve given by its vertex sequence."""

    vertices: np.ndarray

    def __post_init__(self):
        arr = np.array(self.vertices, dtype=np.float64)
        if arr.ndim == 1 and arr.size > 0:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ParameterError("A curve needs at least one vertex with d >= 1 coordinates.")
        if not np.all(np.isfinite(arr)):
            raise ParameterError("Curve vertices must be finite.")
        arr.setflags(write=False)
        object.__setattr__(self, "vertices", arr)

    def __len__(self):
        return self.vertices.shape[0]

    @property
    def dimension(self):
        return self.vertices.shape[1]

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    @cached_property
    def key(self):
        """Hashable identity of the vertex sequence."""
        return (self.vertices.shape, self.vertices.tobytes())

    def __eq__(self, other):
        if not isinstance(other, PolygonalCurve):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"PolygonalCurve({self.vertices.tolist()})"

    def point_at(self, t):
        """Point at parameter t in [0, |curve|-1]."""
        last = len(self) - 1
        if last == 0:
            return self.vertices[0].copy()
        t = min(max(float(t), 0.0), float(last))
        i = min(int(math.floor(t)), last - 1)
        frac = t - i
        return self.vertices[i] + frac * (self.vertices[i + 1] - self.vertices[i])

    def subcurve(self, i, j):
        """Curve through vertices i..j inclusive."""
        return PolygonalCurve(self.vertices[i:j + 1])

    def edge_lengths(self):
        if len(self) < 2:
            return np.zeros(0)
        return np.linalg.norm(np.diff(self.vertices, axis=0), axis=1)

    def to_list(self):
        return self.vertices.tolist()


def segment(a, b):
    return PolygonalCurve(np.vstack([as_point(a), as_point(b)]))


class CurveSet:
    """Ordered multiset of curves sharing one dimension, with stable ids."""

    def __init__(self, curves, ids=None):
        curves = tuple(c if isinstance(c, PolygonalCurve) else PolygonalCurve(c) for c in curves)
        if ids is None:
            ids = range(len(curves))
        ids = tuple(int(i) for i in ids)
        if len(ids) != len(curves):
            raise ParameterError("Curve ids and curves differ in length.")
        dims = {c.dimension for c in curves}
        if len(dims) > 1:
            raise ParameterError(f"Curves of mixed dimension {sorted(dims)} in one set.")
        self.curves = curves
        self.ids = ids

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)

    def __getitem__(self, index):
        return self.curves[index]

    def __repr__(self):
        return f"CurveSet(n={len(self)}, d={self.dimension})"

    @property
    def dimension(self):
        return self.curves[0].dimension if self.curves else None

    @property
    def max_complexity(self):
        return max((len(c) for c in self.curves), default=0)

    def subset(self, indices):
        indices = list(indices)
        return CurveSet([self.curves[i] for i in indices], [self.ids[i] for i in indices])

    def require_non_empty(self, what="curve set"):
        if len(self.curves) == 0:
            raise ParameterError(f"The {what} must not be empty.")
        return self


def grid_index(p, r):
    """Integer cell index of p in the grid of width r, exact in floating point."""
    if not r > 0:
        raise ParameterError(f"Grid width must be positive, got {r}.")
    p = as_point(p)
    idx = np.floor(p / r)
    # p / r may round across an integer; nudge so that idx*r <= p < (idx+1)*r
    idx = np.where(idx * r > p, idx - 1, idx)
    idx = np.where((idx + 1) * r <= p, idx + 1, idx)
    return idx


def grid_snap(p, r):
    """The r-grid-point of p: componentwise floor to a multiple of r."""
    return grid_index(p, r) * r


def cover_ball(ball, cell_width, max_cells=DEFAULT_MAX_CELLS):
    """
    Grid points of all closed cells of width cell_width meeting the ball.

    Returns an (N, d) array in lexicographic order of cell index. Raises
    ResourceError when the bounding box holds more than max_cells cells.
    """
    if not cell_width > 0:
        raise ParameterError(f"Cell width must be positive, got {cell_width}.")
    c, radius = ball.center, ball.radius
    # cells touching the lower face of the box are closed, so start one early
    lo = grid_index(c - radius, cell_width).astype(np.int64) - 1
    hi = grid_index(c + radius, cell_width).astype(np.int64)
    counts = [int(h - l + 1) for l, h in zip(lo, hi)]
    total = math.prod(counts)
    if total > max_cells:
        raise ResourceError(
            f"Grid cover of a ball of radius {radius:g} at width {cell_width:g} needs "
            f"{total} cells, cap is {max_cells}."
        )
    axes = [np.arange(l, h + 1, dtype=np.float64) for l, h in zip(lo, hi)]
    cells = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    lower = cells * cell_width
    upper = (cells + 1) * cell_width
    closest = np.clip(c, lower, upper)
    inside = np.linalg.norm(closest - c, axis=1) <= radius
    return lower[inside]


def point_segment_distance(p, a, b):
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = min(max(float((p - a) @ ab) / denom, 0.0), 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))


def normalize_curve(vertices):
    """Drop repeated vertices and interior vertices lying on the segment of their neighbours."""
    if isinstance(vertices, PolygonalCurve):
        vertices = vertices.vertices
    arr = np.asarray(vertices, dtype=np.float64)
    if arr.ndim == 1 and arr.size > 0:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ParameterError("Cannot normalize an empty vertex list.")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("Curve vertices must be finite.")

    scale = max(float(np.max(np.abs(arr))), 1.0)
    tol = COLLINEAR_TOL * scale
    kept = []
    for v in arr:
        if kept and np.array_equal(kept[-1], v):
            continue
        while len(kept) >= 2 and point_segment_distance(kept[-1], kept[-2], v) <= tol:
            kept.pop()
        if kept and np.array_equal(kept[-1], v):
            continue
        kept.append(v)
    return PolygonalCurve(np.array(kept))

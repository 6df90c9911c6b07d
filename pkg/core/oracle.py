"""
Brute-force baselines for checking the fast algorithms on small inputs.
"""

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from core.errors import ParameterError, ResourceError
from core.evaluation import CostEvaluator
from core.frechet import _free_intervals, frechet_distance, matching_path
from core.geometry import PolygonalCurve, as_point, normalize_curve

logger = logging.getLogger("curvemed.oracle")

DEFAULT_MAX_CURVES = 10**7


def discrete_frechet(a, b):
    """Discrete Frechet distance of the vertex sequences of a and b."""
    dist = cdist(a.vertices, b.vertices)
    p, q = dist.shape
    ret = np.empty((p, q), dtype=np.float64)
    ret[0, 0] = dist[0, 0]
    for i in range(1, p):
        ret[i, 0] = max(ret[i - 1, 0], dist[i, 0])
    for j in range(1, q):
        ret[0, j] = max(ret[0, j - 1], dist[0, j])
    for i in range(1, p):
        for j in range(1, q):
            ret[i, j] = max(min(ret[i - 1, j], ret[i, j - 1], ret[i - 1, j - 1]), dist[i, j])
    return float(ret[-1, -1])


def densify(curve, h):
    """Same curve with every edge split into pieces of length at most h."""
    if not h > 0:
        raise ParameterError(f"Densification step must be positive, got {h}.")
    if len(curve) == 1:
        return curve
    parts = [curve.vertices[:1]]
    for a, b, length in zip(curve.vertices[:-1], curve.vertices[1:], curve.edge_lengths()):
        pieces = max(1, math.ceil(length / h))
        s = np.linspace(0.0, 1.0, pieces + 1)[1:, None]
        parts.append(a + s * (b - a))
    return PolygonalCurve(np.vstack(parts))


def vertex_restricted_optimum(t, l, config=None):
    """Smallest d_F(t, t[idx]) over all index sets with both endpoints and at most l vertices."""
    m = len(t)
    if m <= l:
        return 0.0
    best = math.inf
    for inner in range(0, l - 1):
        for middle in itertools.combinations(range(1, m - 1), inner):
            idx = [0, *middle, m - 1]
            best = min(best, frechet_distance(t, PolygonalCurve(t.vertices[idx]), config))
    return best


@dataclass(frozen=True)
class GridSearchSpec:
    lower: np.ndarray
    upper: np.ndarray
    resolution: float
    max_vertices: int = None
    max_curves: int = DEFAULT_MAX_CURVES

    def __post_init__(self):
        lower, upper = as_point(self.lower), as_point(self.upper)
        if lower.shape != upper.shape:
            raise ParameterError("Grid box corners differ in dimension.")
        if not np.all(upper > lower):
            raise ParameterError("Grid box must have positive extent on every axis.")
        if not self.resolution > 0:
            raise ParameterError(f"Grid resolution must be positive, got {self.resolution}.")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def around(cls, t, resolution, margin=0.0, **kwargs):
        """Box spanning every vertex of t, widened by margin."""
        both = np.vstack([c.vertices for c in t])
        return cls(both.min(axis=0) - margin, both.max(axis=0) + margin + resolution, resolution, **kwargs)

    def points(self):
        axes = [
            lo + self.resolution * np.arange(int(math.floor((hi - lo) / self.resolution + 1e-9)) + 1)
            for lo, hi in zip(self.lower, self.upper)
        ]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))


def _curve_count(points, length):
    return points * (points - 1) ** (length - 1)


def brute_force_median(t, l, spec, evaluator=None):
    """
    Best curve of at most l grid vertices for t, by exhaustive search.

    Returns (curve, cost, additive_error); additive_error = n * sqrt(d) *
    resolution bounds how far the grid optimum can exceed the continuous
    one. Equal costs go to the curve with the smaller largest distance,
    then to the first in (length, vertex indices) order.

    Curves are visited in increasing order of the endpoint lower bound
    sum_i max(|p - start_i|, |q - end_i|) and the scan stops once the bound
    passes the best cost found.
    """
    if len(t) == 0:
        raise ParameterError("brute_force_median needs a non-empty curve set.")
    evaluator = evaluator or CostEvaluator()
    l = min(l, spec.max_vertices) if spec.max_vertices else l
    pts = spec.points()
    count = len(pts)
    total = sum(_curve_count(count, length) for length in range(1, l + 1))
    if total > spec.max_curves:
        raise ResourceError(f"Grid search over {count} points and {l} vertices needs {total} curves, cap is {spec.max_curves}.")

    curves = list(t)
    start_d = cdist(pts, np.array([c.start for c in curves]))
    end_d = cdist(pts, np.array([c.end for c in curves]))
    best, best_cost, best_rank = None, math.inf, None
    tie = 1e-9
    visited = 0

    def limit():
        return best_cost + tie * max(1.0, best_cost) if best is not None else math.inf

    def consider(seq):
        nonlocal best, best_cost, best_rank, visited
        visited += 1
        curve = PolygonalCurve(pts[list(seq)])
        dists = evaluator.distances(curves, curve)
        value = math.fsum(dists.tolist())
        rank = (float(dists.max()), len(seq), seq)
        slack = tie * max(1.0, best_cost) if best is not None else 0.0
        if best is None or value < best_cost - slack or (abs(value - best_cost) <= slack and rank < best_rank):
            best, best_cost, best_rank = curve, value, rank

    single = np.maximum(start_d, end_d).sum(axis=1)
    for p in np.argsort(single, kind="stable"):
        if single[p] > limit():
            break
        consider((int(p),))

    def row(p):
        return np.maximum(start_d[p][None, :], end_d).sum(axis=1)

    if l >= 2:
        floors = np.array([row(p).min() for p in range(count)])
    for length in range(2, l + 1):
        for p in np.argsort(floors, kind="stable"):
            if floors[p] > limit():
                break
            bounds = row(p)
            order = np.argsort(bounds, kind="stable")
            for middle in itertools.product(range(count), repeat=length - 2):
                head = (int(p), *middle)
                if any(x == y for x, y in zip(head, head[1:])):
                    continue
                for q in order:
                    if bounds[q] > limit():
                        break
                    if q != head[-1]:
                        consider(head + (int(q),))

    n, d = len(t), t.dimension
    additive = n * math.sqrt(d) * spec.resolution
    logger.debug(f"grid median over {count} points: cost {best_cost:.6g} after {visited} curves, additive error {additive:.6g}")
    return best, best_cost, additive


def _y_at_x(path, x):
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        if x0 <= x <= x1:
            if x1 == x0:
                return y0
            return y0 + (x - x0) / (x1 - x0) * (y1 - y0)
    return path[-1][1]


def _x_at_y(path, y):
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        if y0 <= y <= y1:
            if y1 == y0:
                return x0
            return x0 + (y - y0) / (y1 - y0) * (x1 - x0)
    return path[-1][0]


class _BallRuns:
    """Maximal runs of a curve inside balls, from the free intervals of every edge."""

    def __init__(self, sigma, centers, r):
        v = sigma.vertices
        self.edges = len(sigma) - 1
        self.lo, self.hi = _free_intervals(v[:-1], v[1:], centers, r)

    def _inside(self, j, e, f):
        return self.lo[j, e] - 1e-9 <= f <= self.hi[j, e] + 1e-9

    def forward_end(self, j, t0):
        """Largest t >= t0 with sigma[t0, t] inside ball j."""
        e = min(int(math.floor(t0)), self.edges - 1)
        if not self._inside(j, e, t0 - e):
            return t0
        while self.hi[j, e] >= 1.0 and e + 1 < self.edges and self.lo[j, e + 1] <= 0.0:
            e += 1
        return max(t0, e + float(min(self.hi[j, e], 1.0)))

    def backward_start(self, j, t0):
        """Smallest t <= t0 with sigma[t, t0] inside ball j."""
        e = max(int(math.ceil(t0)) - 1, 0)
        if not self._inside(j, e, t0 - e):
            return t0
        while self.lo[j, e] <= 0.0 and e > 0 and self.hi[j, e - 1] >= 1.0:
            e -= 1
        return min(t0, e + float(max(self.lo[j, e], 0.0)))


def simple_shortcut(sigma, tau, tol=None, config=None):
    """
    Shortcut sigma so that every vertex lies in a ball around a vertex of tau.

    Each vertex of sigma outside all balls of radius r = d_F(sigma, tau) + tol
    is replaced by the point where sigma leaves the ball of the preceding
    vertex of tau and the point where it enters the ball of the following
    one. The result has at most 2|sigma| - 2 vertices and stays within r of
    tau.
    """
    if len(sigma) < 2:
        raise ParameterError("simple_shortcut needs a curve with at least two vertices.")
    m, n = len(sigma), len(tau)
    if m == 2 or n == 1:
        return sigma
    if tol is None:
        both = np.vstack([sigma.vertices, tau.vertices])
        tol = 1e-9 * max(1.0, float(np.linalg.norm(both.max(axis=0) - both.min(axis=0))))
    r = frechet_distance(sigma, tau, config) + tol
    path = matching_path(sigma, tau, r)
    if path is None:
        raise RuntimeError(f"No matching at radius {r} although the distance is below it.")

    centers = tau.vertices
    runs = _BallRuns(sigma, centers, r)
    out = [sigma.start]
    pos = 0.0
    for i in range(1, m - 1):
        if i <= pos:
            continue
        v = sigma.vertices[i]
        if float(np.min(np.linalg.norm(centers - v, axis=1))) <= r:
            out.append(v)
            pos = float(i)
            continue
        j = min(max(int(math.floor(_y_at_x(path, i))), 0), n - 2)
        start = _x_at_y(path, j)
        # a kept vertex already matched inside edge j serves as the exit point
        exit_t = pos if pos > start else runs.forward_end(j, start)
        entry_t = runs.backward_start(j + 1, _x_at_y(path, j + 1))
        if exit_t > pos:
            out.append(sigma.point_at(exit_t))
        out.append(sigma.point_at(entry_t))
        pos = entry_t
    if pos < m - 1:
        out.append(sigma.end)
    return normalize_curve(np.array(out))

"""
Continuous Frechet distance between polygonal curves.

The decision procedure walks the free-space diagram of the two curves
cell by cell and keeps, for every cell boundary, the part reachable by a
monotone path from (0, 0). The distance itself is found by bisection on
the decision procedure.
"""

from dataclasses import dataclass

import numpy as np

from core.errors import ParameterError

# Slack in free-space parameter units; comparisons are closed.
_EPS = 1e-10

# Default absolute tolerance as a fraction of the bounding-box diameter.
ABS_TOL_SCALE = 1e-9


def _diameter(curves):
    both = np.vstack([c.vertices for c in curves])
    return float(np.linalg.norm(both.max(axis=0) - both.min(axis=0)))


@dataclass(frozen=True)
class FrechetConfig:
    """Tolerances for frechet_distance; abs_tol None means 1e-9 of the bounding-box diameter."""

    abs_tol: float = None
    rel_tol: float = 1e-9

    def __post_init__(self):
        if self.abs_tol is not None and self.abs_tol < 0:
            raise ParameterError("abs_tol must be non-negative.")
        if self.rel_tol < 0:
            raise ParameterError("rel_tol must be non-negative.")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ParameterError("At least one of abs_tol and rel_tol must be positive.")

    def absolute_for(self, a, b):
        if self.abs_tol is not None:
            return self.abs_tol
        return ABS_TOL_SCALE * _diameter([a, b])

    def describe(self, curves):
        """Tolerances for reports; abs bounds the absolute tolerance of any pair drawn from curves."""
        if self.abs_tol is not None:
            return {"abs": self.abs_tol, "abs_rule": "fixed", "rel": self.rel_tol}
        return {
            "abs": ABS_TOL_SCALE * _diameter(curves),
            "abs_rule": f"{ABS_TOL_SCALE:g} x bounding-box diameter of the pair",
            "rel": self.rel_tol,
        }


DEFAULT_CONFIG = FrechetConfig()


def _free_intervals(starts, ends, points, r):
    """
    For every point and every segment starts[k]->ends[k], the parameter
    interval [lo, hi] of the segment within distance r of the point.

    Returns two (len(points), len(starts)) arrays; empty intervals have
    lo = inf and hi = -inf.
    """
    u = ends - starts
    a = np.einsum("kd,kd->k", u, u)[None, :]
    v = points[:, None, :] - starts[None, :, :]
    proj = np.einsum("ikd,kd->ik", v, u)
    vv = np.einsum("ikd,ikd->ik", v, v)
    r2 = r * r
    with np.errstate(divide="ignore", invalid="ignore"):
        disc = proj * proj - a * (vv - r2)
        # tangency lost to rounding
        disc = np.where((disc < 0) & (disc >= -_EPS * a * (vv + r2)), 0.0, disc)
        root = np.sqrt(np.maximum(disc, 0.0))
        lo = np.maximum((proj - root) / a, 0.0)
        hi = np.minimum((proj + root) / a, 1.0)
    empty = (disc < 0) | (lo > hi + _EPS)
    lo = np.minimum(lo, hi)
    degenerate = np.broadcast_to(a == 0, lo.shape)
    lo = np.where(degenerate, 0.0, lo)
    hi = np.where(degenerate, 1.0, hi)
    empty = np.where(degenerate, vv > r2, empty)
    lo = np.where(empty, np.inf, lo)
    hi = np.where(empty, -np.inf, hi)
    return lo, hi


class _FreeSpace:
    """Reachable free space of curves p (x axis) and q (y axis) at radius r."""

    def __init__(self, p, q, r):
        self.p, self.q, self.r = p, q, r
        n, m = len(p) - 1, len(q) - 1
        self.n, self.m = n, m
        # lf: point p_i against q-segment j, shape (n+1, m)
        self.lf_lo, self.lf_hi = _free_intervals(q[:-1], q[1:], p, r)
        # bf: point q_j against p-segment i, stored as (n, m+1)
        bf_lo, bf_hi = _free_intervals(p[:-1], p[1:], q, r)
        self.bf_lo, self.bf_hi = bf_lo.T, bf_hi.T

        self.lr_lo = np.full((n + 1, m), np.inf)
        self.lr_hi = np.full((n + 1, m), -np.inf)
        self.br_lo = np.full((n, m + 1), np.inf)
        self.br_hi = np.full((n, m + 1), -np.inf)
        self.feasible = self._propagate()

    def _propagate(self):
        p, q, r = self.p, self.q, self.r
        n, m = self.n, self.m
        if np.linalg.norm(p[0] - q[0]) > r or np.linalg.norm(p[-1] - q[-1]) > r:
            return False
        lf_lo, lf_hi, bf_lo, bf_hi = self.lf_lo, self.lf_hi, self.bf_lo, self.bf_hi
        lr_lo, lr_hi, br_lo, br_hi = self.lr_lo, self.lr_hi, self.br_lo, self.br_hi

        # left and bottom boundaries are only reachable along the boundary itself
        for j in range(m):
            if j > 0 and lr_hi[0, j - 1] < 1.0 - _EPS:
                break
            if lf_lo[0, j] > _EPS:
                break
            lr_lo[0, j], lr_hi[0, j] = lf_lo[0, j], lf_hi[0, j]
        for i in range(n):
            if i > 0 and br_hi[i - 1, 0] < 1.0 - _EPS:
                break
            if bf_lo[i, 0] > _EPS:
                break
            br_lo[i, 0], br_hi[i, 0] = bf_lo[i, 0], bf_hi[i, 0]

        for i in range(n):
            for j in range(m):
                left = lr_lo[i, j] <= lr_hi[i, j]
                bottom = br_lo[i, j] <= br_hi[i, j]
                if bottom:
                    lr_lo[i + 1, j], lr_hi[i + 1, j] = lf_lo[i + 1, j], lf_hi[i + 1, j]
                elif left:
                    lo = max(lf_lo[i + 1, j], lr_lo[i, j])
                    if lo <= lf_hi[i + 1, j]:
                        lr_lo[i + 1, j], lr_hi[i + 1, j] = lo, lf_hi[i + 1, j]
                if left:
                    br_lo[i, j + 1], br_hi[i, j + 1] = bf_lo[i, j + 1], bf_hi[i, j + 1]
                elif bottom:
                    lo = max(bf_lo[i, j + 1], br_lo[i, j])
                    if lo <= bf_hi[i, j + 1]:
                        br_lo[i, j + 1], br_hi[i, j + 1] = lo, bf_hi[i, j + 1]

        return bool(lr_hi[n, m - 1] >= 1.0 - _EPS or br_hi[n - 1, m] >= 1.0 - _EPS)

    def path(self):
        """Monotone path from (0, 0) to (n, m) as a list of parameter pairs."""
        n, m = self.n, self.m
        points = [(float(n), float(m))]
        i, j = n - 1, m - 1
        ex, ey = 1.0, 1.0  # exit point in local cell coordinates
        while True:
            left_ok = self.lr_lo[i, j] <= self.lr_hi[i, j] and self.lr_lo[i, j] <= ey + _EPS
            bottom_ok = self.br_lo[i, j] <= self.br_hi[i, j] and self.br_lo[i, j] <= ex + _EPS
            if left_ok:
                y = min(self.lr_lo[i, j], ey)
                points.append((float(i), j + y))
                if i == 0:
                    break
                i, ex, ey = i - 1, 1.0, y
            elif bottom_ok:
                x = min(self.br_lo[i, j], ex)
                points.append((i + x, float(j)))
                if j == 0:
                    break
                j, ex, ey = j - 1, x, 1.0
            else:
                raise RuntimeError("Free-space backtracking lost the reachable region.")
        if points[-1] != (0.0, 0.0):
            points.append((0.0, 0.0))
        points.reverse()
        return points


def _point_curve_distance(point, curve):
    # distance to a point is convex along each edge, so vertices attain the maximum
    return float(np.max(np.linalg.norm(curve.vertices - point, axis=1)))


def decide_frechet(a, b, r):
    """True iff d_F(a, b) <= r."""
    if r < 0:
        raise ParameterError(f"Decision radius must be non-negative, got {r}.")
    if len(a) == 1:
        return _point_curve_distance(a.vertices[0], b) <= r
    if len(b) == 1:
        return _point_curve_distance(b.vertices[0], a) <= r
    return _FreeSpace(a.vertices, b.vertices, float(r)).feasible


def matching_path(a, b, r):
    """
    A monotone matching of a and b realising distance at most r, or None.

    The path is a list of (s, t) pairs, s a parameter of a and t of b, both
    in vertex units, running from (0, 0) to (|a|-1, |b|-1).
    """
    if len(a) == 1 or len(b) == 1:
        if not decide_frechet(a, b, r):
            return None
        return [(0.0, 0.0), (float(len(a) - 1), float(len(b) - 1))]
    space = _FreeSpace(a.vertices, b.vertices, float(r))
    if not space.feasible:
        return None
    return space.path()


def frechet_distance(a, b, config=None):
    """Frechet distance of a and b up to the tolerances of config."""
    config = config or DEFAULT_CONFIG
    if len(a) == 1:
        return _point_curve_distance(a.vertices[0], b)
    if len(b) == 1:
        return _point_curve_distance(b.vertices[0], a)

    lo = max(float(np.linalg.norm(a.start - b.start)), float(np.linalg.norm(a.end - b.end)))
    if decide_frechet(a, b, lo):
        return lo
    diff = a.vertices[:, None, :] - b.vertices[None, :, :]
    hi = float(np.sqrt(np.max(np.einsum("ijd,ijd->ij", diff, diff))))
    abs_tol = config.absolute_for(a, b)
    while hi - lo > max(abs_tol, config.rel_tol * lo):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if decide_frechet(a, b, mid):
            hi = mid
        else:
            lo = mid
    return hi


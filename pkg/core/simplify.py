"""
Vertex-restricted minimum-error l-simplification under the Frechet distance.

Shortcut graph over the input vertices (edge i->j when the segment v_i v_j
is within radius r of the subcurve between them), searched for a path with
at most l-1 edges at the smallest feasible candidate radius. The result is
a 4-approximation of the unrestricted minimum-error simplification.
"""

import logging
from collections import deque
from dataclasses import dataclass

import numpy as np

from core.errors import ParameterError
from core.frechet import decide_frechet, frechet_distance
from core.geometry import PolygonalCurve, segment

logger = logging.getLogger("curvemed.simplify")

APPROXIMATION_FACTOR = 4


@dataclass(frozen=True)
class SimplificationResult:
    curve: PolygonalCurve
    error: float
    indices: tuple


class _ShortcutGraph:
    def __init__(self, curve, config):
        self.curve = curve
        self.config = config
        self.m = len(curve)
        self._pieces = {}
        self._memo = {}

    def piece(self, i, j):
        pair = self._pieces.get((i, j))
        if pair is None:
            pair = (segment(self.curve.vertices[i], self.curve.vertices[j]), self.curve.subcurve(i, j))
            self._pieces[(i, j)] = pair
        return pair

    def weight(self, i, j):
        seg, sub = self.piece(i, j)
        return frechet_distance(seg, sub, self.config)

    def has_edge(self, i, j, k, radius):
        key = (i, j, k)
        if key not in self._memo:
            seg, sub = self.piece(i, j)
            self._memo[key] = decide_frechet(seg, sub, radius)
        return self._memo[key]

    def adjacency(self, k, radius):
        return [[j for j in range(i + 1, self.m) if self.has_edge(i, j, k, radius)] for i in range(self.m)]


def _hops_to_end(adjacency):
    m = len(adjacency)
    reverse = [[] for _ in range(m)]
    for i, targets in enumerate(adjacency):
        for j in targets:
            reverse[j].append(i)
    hops = [None] * m
    hops[m - 1] = 0
    queue = deque([m - 1])
    while queue:
        j = queue.popleft()
        for i in reverse[j]:
            if hops[i] is None:
                hops[i] = hops[j] + 1
                queue.append(i)
    return hops


def _lexicographic_shortest_path(adjacency, hops):
    path = [0]
    i = 0
    while i != len(adjacency) - 1:
        i = next(j for j in adjacency[i] if hops[j] is not None and hops[j] == hops[i] - 1)
        path.append(i)
    return path


def simplify(t, l, config=None):
    """Simplify t to at most l vertices taken from its own vertex sequence."""
    if l < 2:
        raise ParameterError(f"Simplification needs l >= 2, got {l}.")
    m = len(t)
    if m <= l:
        return SimplificationResult(curve=t, error=0.0, indices=tuple(range(m)))

    graph = _ShortcutGraph(t, config)
    verts = t.vertices
    diff = verts[:, None, :] - verts[None, :, :]
    pairwise = np.sqrt(np.einsum("ijd,ijd->ij", diff, diff))[np.triu_indices(m, k=1)]
    weights = [graph.weight(i, j) for i in range(m) for j in range(i + 1, m)]
    radii = sorted({0.0, *pairwise.tolist(), *weights})

    def feasible(k):
        hops = _hops_to_end(graph.adjacency(k, radii[k]))
        return hops[0] is not None and hops[0] <= l - 1

    lo, hi = 0, len(radii) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid + 1

    adjacency = graph.adjacency(lo, radii[lo])
    indices = _lexicographic_shortest_path(adjacency, _hops_to_end(adjacency))
    curve = PolygonalCurve(verts[indices])
    error = frechet_distance(t, curve, config)
    logger.debug(f"simplified {m} -> {len(indices)} vertices at radius {radii[lo]:.6g}, error {error:.6g}")
    return SimplificationResult(curve=curve, error=error, indices=tuple(indices))

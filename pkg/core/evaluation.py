import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from core.frechet import DEFAULT_CONFIG, frechet_distance


class CostEvaluator:
    """Memoised Frechet distances and clustering costs, optionally on a thread pool."""

    def __init__(self, config=None, threads=1):
        self.config = config or DEFAULT_CONFIG
        self.threads = max(1, int(threads))
        self._cache = {}
        self._pool = None
        self.evaluations = 0

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def _map(self, fn, items):
        if self.threads == 1 or len(items) < 2:
            return [fn(x) for x in items]
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self.threads)
        return list(self._pool.map(fn, items))

    def distance(self, a, b):
        key = (a.key, b.key)
        value = self._cache.get(key)
        if value is None:
            value = frechet_distance(a, b, self.config)
            self._cache[key] = value
            self.evaluations += 1
        return value

    def distances(self, curves, center):
        """Distances of every curve to one center, in input order."""
        curves = list(curves)
        return np.array(self._map(lambda c: self.distance(center, c), curves), dtype=np.float64)

    def distance_matrix(self, curves, centers):
        """(len(curves), len(centers)) matrix of distances."""
        curves, centers = list(curves), list(centers)
        pairs = [(c, z) for c in curves for z in centers]
        values = self._map(lambda pair: self.distance(pair[1], pair[0]), pairs)
        return np.array(values, dtype=np.float64).reshape(len(curves), len(centers))

    def nearest(self, curves, centers):
        """Index of the closest center per curve (lowest index on ties) and its distance."""
        matrix = self.distance_matrix(curves, centers)
        index = np.argmin(matrix, axis=1)
        return index, matrix[np.arange(len(index)), index]

    def cost(self, curves, centers):
        """Sum over curves of the distance to the closest center; +inf without centers."""
        centers = list(centers)
        if not centers:
            return math.inf
        curves = list(curves)
        if not curves:
            return 0.0
        _, dists = self.nearest(curves, centers)
        return math.fsum(dists.tolist())

"""
Planted (k,l)-median instances: noisy copies of k random base curves.
"""

import math
from dataclasses import dataclass

import numpy as np

from core.errors import ParameterError
from core.geometry import CurveSet, PolygonalCurve
from core.sampling import make_rng


@dataclass(frozen=True)
class PlantedSpec:
    k: int
    n: int
    m: int
    d: int = 2
    radius: float = 0.05
    seed: int = 0
    extent: float = 10.0

    def __post_init__(self):
        if self.k < 1 or self.n < self.k:
            raise ParameterError(f"Need 1 <= k <= n, got k={self.k}, n={self.n}.")
        if self.m < 1 or self.d < 1:
            raise ParameterError("m and d must be positive.")
        if self.radius < 0 or not self.extent > 0:
            raise ParameterError("radius must be non-negative and extent positive.")

    @property
    def planted_bound(self):
        """Upper bound on the cost of the base curves: each vertex moves at most radius*sqrt(d)."""
        return self.n * self.radius * math.sqrt(self.d)


def generate_planted(spec):
    """
    (CurveSet, sidecar) for spec. Curve i copies base curve i mod k with
    every coordinate shifted uniformly in [-radius, radius].
    """
    rng = make_rng(spec.seed)
    bases = rng.uniform(0.0, spec.extent, size=(spec.k, spec.m, spec.d))
    labels = np.arange(spec.n) % spec.k
    noise = rng.uniform(-spec.radius, spec.radius, size=(spec.n, spec.m, spec.d)) if spec.radius > 0 else 0.0
    curves = bases[labels] + noise
    t = CurveSet([PolygonalCurve(c) for c in curves])
    sidecar = {
        "k": spec.k,
        "n": spec.n,
        "m": spec.m,
        "d": spec.d,
        "radius": spec.radius,
        "seed": spec.seed,
        "base_curves": bases.tolist(),
        "labels": labels.tolist(),
        "planted_bound": spec.planted_bound,
    }
    return t, sidecar

"""
Candidate generation for (1,l)-medians by grid covers around sampled curves.

candidates_simple and candidates_advanced return a candidate set that, with
high probability, holds a good median for every cluster taking at least a
1/beta fraction of the input; median5 is the standalone (5+eps) median.
All candidate curves have at most 2l-2 vertices.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import comb

from core.errors import ParameterError, ResourceError
from core.evaluation import CostEvaluator
from core.geometry import Ball, CurveSet, cover_ball, normalize_curve
from core.median_seed import SeedParams, best_by_sample, median34, sample_uniform
from core.sampling import (
    SampleScale,
    advanced_grid,
    advanced_sample_size,
    check_probability,
    child_rng,
    make_rng,
    median5_eval_size,
    median5_grid,
    median5_sample_size,
    simple_grid,
    simple_sample_size,
    subset_size,
)

logger = logging.getLogger("curvemed.candidates")

SEED_MEDIAN = "seed-median"
GRID_ENUMERATION = "grid-enumeration"

ADVANCED_MAX_EPSILON = 0.158


@dataclass(frozen=True)
class EnumerationCaps:
    max_grid_points: int = 10**5
    max_candidates: int = 10**5
    max_subsets: int = 10**4

    def __post_init__(self):
        for name in ("max_grid_points", "max_candidates", "max_subsets"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be at least 1.")


@dataclass(frozen=True)
class CandidateParams:
    beta: float
    delta: float
    epsilon: float
    l: int
    scale: SampleScale = field(default_factory=SampleScale)
    caps: EnumerationCaps = field(default_factory=EnumerationCaps)
    seed: int = 0

    def __post_init__(self):
        if not self.beta >= 1:
            raise ParameterError(f"beta must be at least 1, got {self.beta}.")
        check_probability("delta", self.delta)
        check_probability("epsilon", self.epsilon)
        if self.l < 2:
            raise ParameterError(f"l must be at least 2, got {self.l}.")


class CandidateSet:
    """Deduplicated candidate curves with a provenance tag each."""

    def __init__(self):
        self.curves = []
        self.provenance = []
        self.truncated = False
        self.diagnostics = {}
        self._seen = set()

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)

    def add(self, curve, tag):
        if curve.key in self._seen:
            return False
        self._seen.add(curve.key)
        self.curves.append(curve)
        self.provenance.append(tag)
        return True

    def seeds(self):
        return [c for c, tag in zip(self.curves, self.provenance) if tag == SEED_MEDIAN]

    def add_enumeration(self, points, max_vertices, cap):
        """Add curves enumerated from points until the set holds cap curves."""
        for curve in CurveEnumeration(points, max_vertices):
            if len(self) >= cap:
                self.truncated = True
                return
            self.add(curve, GRID_ENUMERATION)


def _sequences(count, length):
    """Index sequences of the given length with distinct consecutive entries, lexicographic."""
    if length == 1:
        for i in range(count):
            yield (i,)
        return
    for head in _sequences(count, length - 1):
        for i in range(count):
            if i != head[-1]:
                yield head + (i,)


class CurveEnumeration:
    """
    Every normalized curve of 1..max_vertices vertices over a point set.

    Iteration is length-major, then lexicographic in point index, with
    duplicates after normalization dropped. When limit is reached the
    enumeration stops and `truncated` is set.
    """

    def __init__(self, points, max_vertices, limit=None):
        points = np.asarray(points, dtype=np.float64)
        if points.ndim != 2 or len(points) == 0:
            raise ParameterError("Cannot enumerate curves over an empty point set.")
        if max_vertices < 1:
            raise ParameterError(f"max_vertices must be at least 1, got {max_vertices}.")
        self.points = points
        self.max_vertices = max_vertices
        self.limit = limit
        self.truncated = False
        self.emitted = 0

    def __iter__(self):
        seen = set()
        for length in range(1, self.max_vertices + 1):
            for seq in _sequences(len(self.points), length):
                curve = normalize_curve(self.points[list(seq)])
                if curve.key in seen:
                    continue
                if self.limit is not None and self.emitted >= self.limit:
                    self.truncated = True
                    return
                seen.add(curve.key)
                self.emitted += 1
                yield curve


def enumerate_curves(points, max_vertices, caps=None):
    caps = caps or EnumerationCaps()
    return CurveEnumeration(points, max_vertices, limit=caps.max_candidates)


def _cover_within_budget(center, radius, width, budget, stats):
    """Grid points covering B(center, radius), coarsening the width until they fit the budget."""
    if radius <= 0 or width <= 0:
        return center[None, :]
    d = len(center)
    while True:
        try:
            return cover_ball(Ball(center, radius), width, max_cells=budget)
        except ResourceError:
            per_axis = int(math.floor(budget ** (1.0 / d)))
            if per_axis <= 2:
                stats["coarsened_grids"] = stats.get("coarsened_grids", 0) + 1
                return center[None, :]
            coarser = 2 * radius / (per_axis - 2)
            width = max(coarser, width * 2)
            stats["coarsened_grids"] = stats.get("coarsened_grids", 0) + 1


def curve_count(points, max_vertices):
    """Number of vertex sequences of 1..max_vertices points with distinct neighbours."""
    return sum(points * (points - 1) ** (length - 1) for length in range(1, max_vertices + 1))


def pool_budget(caps, max_vertices):
    """Largest pool, at most max_grid_points, whose full enumeration fits max_candidates."""
    lo, hi = 1, caps.max_grid_points
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if curve_count(mid, max_vertices) <= caps.max_candidates:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _point_pool(vertices, radius, width, budget, stats):
    """The vertices themselves plus a grid cover around each, sized to roughly budget points."""
    vertices = np.asarray(vertices, dtype=np.float64)
    per_vertex = max(1, (budget - len(vertices)) // len(vertices))
    parts = [vertices] + [_cover_within_budget(v, radius, width, per_vertex, stats) for v in vertices]
    return np.unique(np.vstack(parts), axis=0)


def _superset_candidates(t, params, rng, evaluator, eps_prime, sample_size, grid_for, shared_pool):
    t = t if isinstance(t, CurveSet) else CurveSet(t)
    t.require_non_empty("input of the candidate generator")
    rng = rng if rng is not None else make_rng(params.seed)
    evaluator = evaluator or CostEvaluator()
    caps = params.caps
    n, d, l = len(t), t.dimension, params.l
    max_vertices = 2 * l - 2

    s = sample_uniform(t, params.scale.apply(sample_size), rng)
    size = subset_size(len(s), params.beta)
    out = CandidateSet()
    stats = {"coarsened_grids": 0}
    budget = pool_budget(caps, max_vertices)
    processed = 0
    seed_params = SeedParams(delta=params.delta / 4, l=l, scale=params.scale, seed=params.seed)

    for k, index in enumerate(itertools.combinations(range(len(s)), size)):
        if k >= caps.max_subsets:
            out.truncated = True
            break
        s_prime = s.subset(index)
        c = median34(s_prime, seed_params, child_rng(rng, k), evaluator)
        cost = evaluator.cost(s_prime, [c])
        grid = grid_for(cost, n, len(s))
        out.add(c, SEED_MEDIAN)
        processed += 1
        if shared_pool:
            vertices = np.vstack([curve.vertices for curve in s_prime])
            pools = [_point_pool(vertices, grid.radius, grid.width, budget, stats)]
        else:
            pools = [_point_pool(curve.vertices, grid.radius, grid.width, budget, stats) for curve in s_prime]
        for pool in pools:
            out.add_enumeration(pool, max_vertices, caps.max_candidates)

    if stats["coarsened_grids"]:
        out.truncated = True
        logger.warning(f"{stats['coarsened_grids']} grid covers coarsened to fit max_grid_points={caps.max_grid_points}")
    if out.truncated:
        logger.warning(f"candidate generation truncated at {len(out)} candidates")
    out.diagnostics.update(
        sample_size=len(s),
        subset_size=size,
        subsets_total=int(comb(len(s), size, exact=True)),
        subsets_processed=processed,
        coarsened_grids=stats["coarsened_grids"],
        pool_budget=budget,
        candidates=len(out),
        truncated=out.truncated,
        scale=params.scale.factor,
    )
    return out


def candidates_simple(t, params, rng=None, evaluator=None):
    """Candidates holding a (3+eps)-approximate (1,l)-median of every cluster of size >= n/beta."""
    eps_prime = params.epsilon / 3
    sample_size = simple_sample_size(params.beta, params.delta, eps_prime)
    d = (t.dimension if isinstance(t, CurveSet) else CurveSet(t).dimension)

    def grid_for(cost, n, s_size):
        return simple_grid(cost, params.delta, n, s_size, eps_prime, d)

    return _superset_candidates(t, params, rng, evaluator, eps_prime, sample_size, grid_for, shared_pool=False)


def candidates_advanced(t, params, rng=None, evaluator=None):
    """Candidates holding a (1+eps)-approximate (1,l)-median of every cluster of size >= n/beta."""
    if not params.epsilon <= ADVANCED_MAX_EPSILON:
        raise ParameterError(f"Advanced shortcutting needs epsilon in (0, {ADVANCED_MAX_EPSILON}], got {params.epsilon}.")
    eps_prime = params.epsilon / 6
    sample_size, substituted = advanced_sample_size(params.beta, params.delta, eps_prime, params.l)
    d = (t.dimension if isinstance(t, CurveSet) else CurveSet(t).dimension)

    def grid_for(cost, n, s_size):
        return advanced_grid(cost, params.delta, n, s_size, eps_prime, params.l, d)

    out = _superset_candidates(t, params, rng, evaluator, eps_prime, sample_size, grid_for, shared_pool=True)
    out.diagnostics["l2_log_substitution"] = substituted
    return out


@dataclass
class MedianResult:
    curve: object
    cost: float
    truncated: bool = False
    diagnostics: dict = field(default_factory=dict)


def median5(t, delta, epsilon, l, scale=None, caps=None, rng=None, evaluator=None, seed=0):
    """(5+eps)-approximate (1,l)-median with at most 2l-2 vertices, w.p. 1-delta."""
    t = t if isinstance(t, CurveSet) else CurveSet(t)
    t.require_non_empty("input of median5")
    check_probability("delta", delta)
    check_probability("epsilon", epsilon)
    scale = scale or SampleScale()
    caps = caps or EnumerationCaps()
    rng = rng if rng is not None else make_rng(seed)
    evaluator = evaluator or CostEvaluator()
    n, d = len(t), t.dimension

    seed_curve = median34(t, SeedParams(delta=delta / 2, l=l, scale=scale, seed=seed), child_rng(rng, 0), evaluator)
    seed_cost = evaluator.cost(t, [seed_curve])
    cost_bound = seed_cost / 34
    eps_prime = epsilon / 9

    s = sample_uniform(t, scale.apply(median5_sample_size(delta, eps_prime)), rng)
    w = sample_uniform(t, scale.apply(median5_eval_size(delta, eps_prime)), rng)
    c = best_by_sample(s, w, evaluator)

    grid = median5_grid(cost_bound, n, eps_prime, d)
    stats = {"coarsened_grids": 0}
    pool = _point_pool(c.vertices, grid.radius, grid.width, pool_budget(caps, 2 * l - 2), stats)
    enumeration = CurveEnumeration(pool, 2 * l - 2, limit=caps.max_candidates)

    best, best_cost = None, math.inf
    for candidate in enumeration:
        cost = evaluator.cost(t, [candidate])
        if cost < best_cost:
            best, best_cost = candidate, cost

    truncated = enumeration.truncated or stats["coarsened_grids"] > 0
    if truncated or best is None:
        logger.warning("median5: enumeration truncated, keeping the seed median as fallback")
        if seed_cost < best_cost:
            best, best_cost = seed_curve, seed_cost

    return MedianResult(
        curve=best,
        cost=best_cost,
        truncated=truncated,
        diagnostics={
            "seed_cost": seed_cost,
            "lower_bound": cost_bound,
            "sample_size": len(s),
            "eval_size": len(w),
            "pool_size": len(pool),
            "candidates": enumeration.emitted,
            "coarsened_grids": stats["coarsened_grids"],
            "grid_radius": grid.radius,
            "grid_width": grid.width,
        },
    )

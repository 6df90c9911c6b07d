"""
Recursive (k,l)-median approximation scheme.

Each call either prunes the half of the input closest to the centers found
so far and recurses on the rest, or asks a candidate plugin for 1-median
candidates and recurses once per candidate with one center fewer to place.
The cheapest center set seen over all branches wins.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from core.candidates import (
    ADVANCED_MAX_EPSILON,
    CandidateParams,
    EnumerationCaps,
    candidates_advanced,
    candidates_simple,
    median5,
)
from core.errors import CurveMedError, ParameterError
from core.evaluation import CostEvaluator
from core.frechet import DEFAULT_CONFIG
from core.geometry import CurveSet
from core.median_seed import SeedParams, median34
from core.sampling import SampleScale, advanced_beta, check_probability, child_rng, make_rng, simple_beta

logger = logging.getLogger("curvemed.kmedian")

SIMPLE = "simple"
ADVANCED = "advanced"
MEDIAN5 = "median5"
MEDIAN34 = "median34"
ALGORITHMS = (SIMPLE, ADVANCED, MEDIAN5, MEDIAN34)

# child stream keys of one recursion node
_PRUNE_KEY = 0
_CANDIDATE_KEY = 1
_PLUGIN_KEY = 2


@dataclass(frozen=True)
class ClusteringParams:
    k: int
    l: int
    delta: float = 0.1
    epsilon: float = 0.5
    seed: int = 0
    scale: SampleScale = field(default_factory=SampleScale)
    caps: EnumerationCaps = field(default_factory=EnumerationCaps)
    frechet: object = DEFAULT_CONFIG
    threads: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"k must be at least 1, got {self.k}.")
        if self.l < 2:
            raise ParameterError(f"l must be at least 2, got {self.l}.")
        check_probability("delta", self.delta)
        check_probability("epsilon", self.epsilon)
        if self.threads < 1:
            raise ParameterError(f"threads must be at least 1, got {self.threads}.")


@dataclass
class ClusteringResult:
    centers: list
    assignment: list
    total_cost: float
    cluster_costs: list
    diagnostics: dict = field(default_factory=dict)


def cost(t, centers, evaluator=None):
    evaluator = evaluator or CostEvaluator()
    return evaluator.cost(t, centers)


def prune_partition(t, centers, evaluator=None):
    """Split t into (kept, removed); removed holds the floor(|t|/2) curves closest to centers."""
    centers = list(centers)
    if not centers:
        raise ParameterError("prune_partition needs at least one center.")
    evaluator = evaluator or CostEvaluator()
    if len(t) == 0:
        return t, t
    _, dists = evaluator.nearest(t, centers)
    order = sorted(range(len(t)), key=lambda i: (dists[i], t.ids[i]))
    removed = set(order[: len(t) // 2])
    kept = [i for i in range(len(t)) if i not in removed]
    return t.subset(kept), t.subset(sorted(removed))


def _union(centers, t):
    seen = {c.key for c in centers}
    out = list(centers)
    for curve in t:
        if curve.key not in seen:
            seen.add(curve.key)
            out.append(curve)
    return out


class KMedianSearch:
    """
    One run of the recursive scheme with its bookkeeping.

    Every recursion node derives its streams from its own rng: the pruning
    branch uses child key 0, the plugin key 2, and candidate i key (1, i),
    so results do not depend on the order branches are explored.
    """

    def __init__(self, plugin, k, beta, delta, epsilon, evaluator=None, record=False):
        if not beta > 2 * k:
            raise ParameterError(f"The recursive scheme needs beta > 2k, got beta={beta}, k={k}.")
        self.plugin = plugin
        self.k = k
        self.beta = beta
        self.delta = delta
        self.epsilon = epsilon
        self.evaluator = evaluator or CostEvaluator()
        self.record = record
        self.nodes = 0
        self.max_depth = 0
        self.max_prune_depth = 0
        self.plugin_calls = 0
        self.candidates_seen = 0
        self.truncated = False
        self.evaluated = []

    def run(self, t, centers, kappa, rng):
        t = t if isinstance(t, CurveSet) else CurveSet(t)
        t.require_non_empty("input of the k-median search")
        return self._search(t, list(centers), kappa, rng, 0, 0)

    def _search(self, t, centers, kappa, rng, depth, pruned):
        # pruned counts the pruning steps on the path from the root
        self.nodes += 1
        self.max_depth = max(self.max_depth, depth)
        self.max_prune_depth = max(self.max_prune_depth, pruned)
        if kappa == 0:
            return centers
        if kappa >= len(t):
            return _union(centers, t)

        best, best_cost = None, math.inf

        def keep(option):
            nonlocal best, best_cost
            value = self.evaluator.cost(t, option)
            if self.record:
                self.evaluated.append((depth, option, value))
            if best is None or value < best_cost:
                best, best_cost = option, value

        if centers:
            kept, _ = prune_partition(t, centers, self.evaluator)
            keep(self._search(kept, centers, kappa, child_rng(rng, _PRUNE_KEY), depth + 1, pruned + 1))

        found = self.plugin(t, self.beta, self.delta / self.k, self.epsilon, child_rng(rng, _PLUGIN_KEY))
        self.plugin_calls += 1
        if getattr(found, "truncated", False):
            self.truncated = True
        count = 0
        for i, candidate in enumerate(found):
            count += 1
            keep(self._search(t, centers + [candidate], kappa - 1, child_rng(rng, _CANDIDATE_KEY, i), depth + 1, pruned))
        self.candidates_seen += count
        if best is None:
            raise CurveMedError("The candidate plugin returned no candidates for a non-empty input.")
        logger.debug(f"depth {depth}: |T|={len(t)} kappa={kappa} {count} candidates")
        return best

    def diagnostics(self):
        return {
            "nodes": self.nodes,
            "max_depth": self.max_depth,
            "max_prune_depth": self.max_prune_depth,
            "plugin_calls": self.plugin_calls,
            "candidates_seen": self.candidates_seen,
            "truncated": self.truncated,
        }


def kmedian(t, c, kappa, beta, delta, epsilon, plugin, rng, k=None, evaluator=None):
    """Center set of at most len(c) + kappa curves for t; k defaults to kappa + len(c)."""
    k = k if k is not None else kappa + len(c)
    return KMedianSearch(plugin, k, beta, delta, epsilon, evaluator).run(t, c, kappa, rng)


def _superset_plugin(generator, params, evaluator):
    def plugin(t, beta, delta, epsilon, rng):
        candidate_params = CandidateParams(
            beta=beta, delta=delta, epsilon=epsilon, l=params.l, scale=params.scale, caps=params.caps, seed=params.seed
        )
        return generator(t, candidate_params, rng, evaluator)

    return plugin


def _assemble(t, centers, evaluator, diagnostics):
    index, dists = evaluator.nearest(t, centers)
    cluster_costs = [math.fsum(dists[index == j].tolist()) for j in range(len(centers))]
    return ClusteringResult(
        centers=list(centers),
        assignment=[int(i) for i in index],
        total_cost=math.fsum(dists.tolist()),
        cluster_costs=cluster_costs,
        diagnostics=diagnostics,
    )


def cluster(t, params, algorithm=SIMPLE, rng=None, evaluator=None):
    """Top-level (k,l)-median clustering of t with one of the four algorithms."""
    t = t if isinstance(t, CurveSet) else CurveSet(t)
    t.require_non_empty("input of cluster")
    if algorithm not in ALGORITHMS:
        raise ParameterError(f"Unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}.")
    rng = rng if rng is not None else make_rng(params.seed)
    owned = evaluator is None
    evaluator = evaluator or CostEvaluator(params.frechet, params.threads)
    diagnostics = {
        "algorithm": algorithm,
        "seed": params.seed,
        "scale": {"factor": params.scale.factor, "mode": params.scale.mode},
        "frechet_tolerance": params.frechet.describe(t),
        "truncated": False,
    }

    try:
        if algorithm in (MEDIAN5, MEDIAN34):
            if params.k != 1:
                raise ParameterError(f"{algorithm} computes a single median; k must be 1, got {params.k}.")
            if algorithm == MEDIAN34:
                seed_params = SeedParams(delta=params.delta, l=params.l, scale=params.scale, seed=params.seed)
                centers = [median34(t, seed_params, rng, evaluator)]
            else:
                result = median5(t, params.delta, params.epsilon, params.l, params.scale, params.caps, rng, evaluator, params.seed)
                centers = [result.curve]
                diagnostics.update(truncated=result.truncated, lower_bound=result.diagnostics["lower_bound"])
                diagnostics["median5"] = result.diagnostics
        else:
            if algorithm == SIMPLE:
                beta, inner_eps, generator = simple_beta(params.k, params.epsilon), params.epsilon / 5, candidates_simple
            else:
                if not params.epsilon <= ADVANCED_MAX_EPSILON:
                    raise ParameterError(
                        f"Advanced shortcutting needs epsilon in (0, {ADVANCED_MAX_EPSILON}], got {params.epsilon}."
                    )
                beta, inner_eps, generator = advanced_beta(params.k, params.epsilon), params.epsilon / 3, candidates_advanced
            search = KMedianSearch(
                _superset_plugin(generator, params, evaluator), params.k, beta, params.delta, inner_eps, evaluator
            )
            centers = search.run(t, [], params.k, rng)
            diagnostics.update(beta=beta, inner_epsilon=inner_eps, recursion=search.diagnostics())
            diagnostics["truncated"] = search.truncated
            if search.truncated:
                logger.warning("candidate generation was truncated; the approximation guarantee does not hold")

        oversized = sum(1 for c in centers if len(c) > 2 * params.l - 2)
        if oversized:
            logger.info(f"{oversized} centers are raw input curves with more than 2l-2 vertices")
        diagnostics["oversized_centers"] = oversized
        return _assemble(t, centers, evaluator, diagnostics)
    finally:
        if owned:
            evaluator.close()


def assignment_sizes(result):
    return np.bincount(np.asarray(result.assignment, dtype=np.int64), minlength=len(result.centers)).tolist()

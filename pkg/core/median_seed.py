"""
34-approximate (1,l)-median: simplify a small uniform sample of the input
and keep the simplification that is cheapest against a second sample.
"""

import logging
from dataclasses import dataclass, field

from core.errors import ParameterError
from core.evaluation import CostEvaluator
from core.geometry import CurveSet
from core.sampling import (
    SampleScale,
    check_probability,
    make_rng,
    seed_eval_size,
    seed_sample_size,
)
from core.simplify import simplify

logger = logging.getLogger("curvemed.median_seed")

APPROXIMATION_FACTOR = 34


@dataclass(frozen=True)
class SeedParams:
    delta: float
    l: int
    scale: SampleScale = field(default_factory=SampleScale)
    seed: int = 0

    def __post_init__(self):
        check_probability("delta", self.delta)
        if self.l < 2:
            raise ParameterError(f"l must be at least 2, got {self.l}.")


def sample_uniform(t, count, rng):
    """count draws from t, uniform and independent, with replacement."""
    if len(t) == 0:
        raise ParameterError("Cannot sample from an empty curve set.")
    if count < 1:
        raise ParameterError(f"Sample size must be positive, got {count}.")
    return t.subset(rng.integers(0, len(t), size=count).tolist())


def best_by_sample(candidates, w, evaluator=None):
    """Candidate with the smallest summed distance to w; first index wins ties."""
    evaluator = evaluator or CostEvaluator()
    candidates = list(candidates)
    if not candidates or len(w) == 0:
        raise ParameterError("best_by_sample needs candidates and a non-empty sample.")
    best, best_cost = None, None
    for c in candidates:
        cost = evaluator.cost(w, [c])
        if best_cost is None or cost < best_cost:
            best, best_cost = c, cost
    return best


def median34(t, params, rng=None, evaluator=None):
    """Curve of at most l vertices; w.p. 1-delta its cost is within 34 of optimal."""
    t = t if isinstance(t, CurveSet) else CurveSet(t)
    t.require_non_empty("input of median34")
    rng = rng if rng is not None else make_rng(params.seed)
    evaluator = evaluator or CostEvaluator()

    s = sample_uniform(t, params.scale.apply(seed_sample_size(params.delta)), rng)
    simplified = [simplify(curve, params.l, evaluator.config).curve for curve in s]
    w = sample_uniform(t, params.scale.apply(seed_eval_size(params.delta)), rng)
    logger.debug(f"median34: |S|={len(s)} |W|={len(w)} over n={len(t)}")
    return best_by_sample(simplified, w, evaluator)

"""Statistical acceptance runs at scaled sample sizes; select with `pytest -m slow`."""

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from core.candidates import (
    GRID_ENUMERATION,
    CandidateParams,
    EnumerationCaps,
    candidates_advanced,
    candidates_simple,
)
from core.evaluation import CostEvaluator
from core.geometry import PolygonalCurve
from core.kmedian import SIMPLE, ClusteringParams, cluster, kmedian
from core.median_seed import SeedParams, median34
from core.oracle import GridSearchSpec, brute_force_median
from core.planted import PlantedSpec, generate_planted
from core.sampling import SampleScale, make_rng
from core.verification import check_sandwich, check_shortcut, check_simplify
from ui.report import build_report, dumps

pytestmark = pytest.mark.slow


def test_frechet_sandwich():
    result = check_sandwich(make_rng(100), 200, h=0.01, max_vertices=10)
    assert result.ok, result.failures


def test_simplify_within_factor_four():
    result = check_simplify(make_rng(101), 100, l=3, max_vertices=8)
    assert result.ok, result.failures


def test_shortcut_constructive():
    result = check_shortcut(make_rng(102), 200, max_vertices=8)
    assert result.ok, result.failures


def test_median34_within_factor_34():
    hits = 0
    for trial in range(50):
        spec = PlantedSpec(k=1, n=20, m=3, radius=0.05, seed=trial)
        t, _ = generate_planted(spec)
        c = median34(t, SeedParams(delta=0.2, l=3, seed=trial))
        hits += CostEvaluator().cost(t, [c]) <= 34 * spec.planted_bound
    assert hits >= 40


def any_within(t, candidates, target, evaluator):
    """True if some candidate costs at most target, scanning by the endpoint lower bound."""
    if not candidates:
        return False
    starts = cdist([c.start for c in candidates], [c.start for c in t])
    ends = cdist([c.end for c in candidates], [c.end for c in t])
    bounds = np.maximum(starts, ends).sum(axis=1)
    for i in np.argsort(bounds, kind="stable"):
        if bounds[i] > target:
            return False
        if evaluator.cost(t, [candidates[i]]) <= target:
            return True
    return False


@pytest.mark.parametrize(
    "generator, epsilon, scale, factor",
    [(candidates_simple, 0.5, 0.03, 3.5), (candidates_advanced, 0.15, 0.003, 1.15)],
)
def test_candidate_quality_against_grid_optimum(generator, epsilon, scale, factor):
    caps = EnumerationCaps(max_grid_points=10**5, max_candidates=10**5, max_subsets=10**5)
    hits = grid_hits = 0
    for trial in range(20):
        t, _ = generate_planted(PlantedSpec(k=1, n=6, m=2, radius=0.05, seed=200 + trial, extent=1.0))
        evaluator = CostEvaluator()
        spec = GridSearchSpec.around(t, 0.02, max_curves=10**8)
        _, optimum, additive = brute_force_median(t, 2, spec, evaluator)
        params = CandidateParams(beta=1, delta=0.2, epsilon=epsilon, l=2, scale=SampleScale.test(scale), caps=caps, seed=trial)
        found = generator(t, params, evaluator=evaluator)
        target = factor * (optimum + additive)
        hits += any_within(t, found.curves, target, evaluator)
        grid = [c for c, tag in zip(found.curves, found.provenance) if tag == GRID_ENUMERATION]
        grid_hits += any_within(t, grid, target, evaluator)
    assert hits >= 16
    assert grid_hits >= 16


def test_recursive_scheme_with_planted_centers():
    for trial in range(20):
        spec = PlantedSpec(k=2, n=12, m=3, radius=0.05, seed=300 + trial)
        t, sidecar = generate_planted(spec)
        bases = [PolygonalCurve(b) for b in sidecar["base_curves"]]
        evaluator = CostEvaluator()
        planted = evaluator.cost(t, bases)

        def oracle(t, beta, delta, epsilon, rng):
            return bases

        centers = kmedian(t, [], 2, 10, 0.1, 0.5, oracle, make_rng(trial), evaluator=evaluator)
        assert evaluator.cost(t, centers) <= (1 + 16 / 6) * planted


@pytest.mark.parametrize("threads", [1, 4])
def test_reports_are_reproducible(threads):
    t, _ = generate_planted(PlantedSpec(k=2, n=10, m=3, seed=5))
    caps = EnumerationCaps(max_grid_points=8, max_candidates=5, max_subsets=2)
    params = ClusteringParams(k=2, l=2, seed=9, scale=SampleScale.test(1e-4), caps=caps, threads=threads)
    texts = set()
    for _ in range(5):
        report = build_report(t, params, SIMPLE, cluster(t, params, SIMPLE), wall_time=0.0)
        texts.add(dumps(report))
    assert len(texts) == 1


def test_planted_clusters_recovered_at_test_scale():
    caps = EnumerationCaps(max_grid_points=8, max_candidates=6, max_subsets=3)
    for seed in range(3):
        spec = PlantedSpec(k=2, n=10, m=2, radius=0.05, seed=400 + seed)
        t, _ = generate_planted(spec)
        params = ClusteringParams(k=2, l=2, seed=seed, scale=SampleScale.test(1e-4), caps=caps)
        result = cluster(t, params, SIMPLE)
        assert result.total_cost <= 2 * spec.planted_bound + 1e-6

"""
Self-checks of the fast algorithms against the brute-force oracles on
seeded random instances.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from core.evaluation import CostEvaluator
from core.frechet import frechet_distance
from core.geometry import CurveSet, PolygonalCurve
from core.median_seed import SeedParams, median34
from core.oracle import (
    GridSearchSpec,
    brute_force_median,
    densify,
    discrete_frechet,
    simple_shortcut,
    vertex_restricted_optimum,
)
from core.sampling import SampleScale, child_rng, make_rng
from core.simplify import APPROXIMATION_FACTOR, simplify

logger = logging.getLogger("curvemed.verification")

CHECK_TOL = 1e-6


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.failed == 0 and self.passed > 0

    def record(self, condition, detail):
        if condition:
            self.passed += 1
        else:
            self.failed += 1
            self.failures.append(detail)


def random_curve(rng, m, d=2, extent=1.0):
    return PolygonalCurve(rng.uniform(0.0, extent, size=(m, d)))


def check_sandwich(rng, trials, h=0.05, max_vertices=6):
    """discrete_frechet(dense) - h <= frechet_distance <= discrete_frechet(dense)."""
    result = CheckResult("frechet-sandwich")
    for trial in range(trials):
        a = random_curve(rng, int(rng.integers(2, max_vertices + 1)))
        b = random_curve(rng, int(rng.integers(2, max_vertices + 1)))
        d = frechet_distance(a, b)
        dd = discrete_frechet(densify(a, h), densify(b, h))
        result.record(dd - h - CHECK_TOL <= d <= dd + CHECK_TOL, f"trial {trial}: d_F={d} d_DF={dd}")
    return result


def check_shortcut(rng, trials, max_vertices=8):
    result = CheckResult("simple-shortcut")
    for trial in range(trials):
        sigma = random_curve(rng, int(rng.integers(2, max_vertices + 1)))
        tau = random_curve(rng, int(rng.integers(1, max_vertices + 1)))
        r = frechet_distance(sigma, tau)
        out = simple_shortcut(sigma, tau)
        gaps = np.linalg.norm(out.vertices[:, None, :] - tau.vertices[None, :, :], axis=2).min(axis=1)
        ok = (
            len(out) <= 2 * len(sigma) - 2
            and bool(np.all(gaps <= r + CHECK_TOL))
            and frechet_distance(out, tau) <= r + CHECK_TOL
        )
        result.record(ok, f"trial {trial}: |sigma|={len(sigma)} |out|={len(out)} r={r}")
    return result


def check_simplify(rng, trials, l=3, max_vertices=7):
    result = CheckResult("simplify-factor")
    for trial in range(trials):
        t = random_curve(rng, int(rng.integers(2, max_vertices + 1)))
        error = simplify(t, l).error
        best = vertex_restricted_optimum(t, l)
        result.record(error <= APPROXIMATION_FACTOR * best + CHECK_TOL, f"trial {trial}: error={error} opt={best}")
    return result


def check_grid_median(rng, trials, resolution=0.5):
    """No median beats the grid optimum by more than its additive error; refining never costs more."""
    result = CheckResult("grid-median")
    evaluator = CostEvaluator()
    for trial in range(trials):
        t = CurveSet([random_curve(rng, 2) for _ in range(3)])
        spec = GridSearchSpec.around(t, resolution)
        _, coarse, additive = brute_force_median(t, 2, spec, evaluator)
        finer = GridSearchSpec(spec.lower, spec.upper, resolution / 2)
        _, fine, _ = brute_force_median(t, 2, finer, evaluator)
        seed = median34(t, SeedParams(delta=0.2, l=2, scale=SampleScale.test(0.5)), child_rng(rng, trial), evaluator)
        found = evaluator.cost(t, [seed])
        result.record(found >= coarse - additive - CHECK_TOL, f"trial {trial}: median34 {found} < grid {coarse} - {additive}")
        result.record(fine <= coarse + CHECK_TOL, f"trial {trial}: refined grid {fine} > {coarse}")
    return result


SUITES = {
    "sandwich": check_sandwich,
    "shortcut": check_shortcut,
    "simplify": check_simplify,
    "grid-median": check_grid_median,
}


def run_suites(seed=1, trials=20, names=None):
    rng = make_rng(seed)
    results = []
    for i, name in enumerate(names or SUITES):
        result = SUITES[name](child_rng(rng, i), trials)
        level = logging.INFO if result.ok else logging.WARNING
        logger.log(level, f"{result.name}: {result.passed} passed, {result.failed} failed")
        results.append(result)
    return results


def summary_line(result):
    status = "PASS" if result.ok else "FAIL"
    return f"{status} {result.name}: {result.passed} passed, {result.failed} failed"


def all_ok(results):
    return all(r.ok for r in results) and sum(r.passed for r in results) > 0

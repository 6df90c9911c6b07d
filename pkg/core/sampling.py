"""
Random streams and the sample-size and grid formulas of the median algorithms.

Formulas are applied unmodified; only SampleScale may shrink the resulting
sizes.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from core.errors import ParameterError

logger = logging.getLogger("curvemed.sampling")

FAITHFUL = "faithful"
TEST = "test"


@dataclass(frozen=True)
class SampleScale:
    factor: float = 1.0
    mode: str = FAITHFUL

    def __post_init__(self):
        if self.mode not in (FAITHFUL, TEST):
            raise ParameterError(f"Unknown sample scale mode {self.mode!r}.")
        if not self.factor > 0:
            raise ParameterError(f"Sample scale factor must be positive, got {self.factor}.")
        if self.mode == FAITHFUL and self.factor != 1.0:
            raise ParameterError("Faithful mode requires a scale factor of 1.0.")

    @classmethod
    def test(cls, factor):
        return cls(factor=factor, mode=TEST)

    def apply(self, raw):
        if self.factor == 1.0:
            return max(1, int(raw))
        return max(1, math.ceil(raw * self.factor))


@dataclass(frozen=True)
class GridParameters:
    delta_lower: float
    delta_upper: float
    radius: float
    width: float


def make_rng(seed):
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def child_rng(rng, *key):
    """Stream derived from rng's seed sequence and key; independent of rng's state."""
    seq = rng.bit_generator.seed_seq
    spawn_key = tuple(seq.spawn_key) + tuple(int(k) for k in key)
    return np.random.default_rng(np.random.SeedSequence(seq.entropy, spawn_key=spawn_key))


def check_probability(name, value):
    if not 0 < value < 1:
        raise ParameterError(f"{name} must lie in (0, 1), got {value}.")


def seed_sample_size(delta):
    check_probability("delta", delta)
    return math.ceil(2 * (math.log(2) - math.log(delta)))


def seed_eval_size(delta):
    check_probability("delta", delta)
    inner = math.ceil(4 * math.log(2) - math.log(delta))
    return math.ceil(-64 * (math.log(delta) - math.log(inner)))


def simple_sample_size(beta, delta, eps_prime):
    check_probability("delta", delta)
    return math.ceil(-8 * beta / eps_prime * (math.log(delta) - math.log(4)))


def advanced_sample_size(beta, delta, eps_prime, l):
    """Returns (size, substituted); for l = 2 the term ln(4(2l-4)) uses max(2l-4, 1)."""
    check_probability("delta", delta)
    count = 2 * l - 4
    substituted = count < 1
    if substituted:
        logger.warning(f"l={l}: ln(4(2l-4)) is undefined, substituting max(2l-4, 1)")
        count = 1
    size = math.ceil(-8 * beta * l / eps_prime * (math.log(delta) - math.log(4 * count)))
    return size, substituted


def median5_sample_size(delta, eps_prime):
    check_probability("delta", delta)
    return math.ceil(-2 / eps_prime * (math.log(delta) - math.log(4)))


def median5_eval_size(delta, eps_prime):
    check_probability("delta", delta)
    inner = math.ceil(-8 / eps_prime * (math.log(delta) - math.log(4)))
    return math.ceil(-64 / eps_prime**2 * (math.log(delta) - math.log(inner)))


def subset_size(sample_size, beta):
    return min(sample_size, max(1, math.ceil(sample_size / (2 * beta))))


def simple_grid(cost, delta, n, sample_size, eps_prime, d):
    lower = delta * n / (2 * sample_size) * (cost / 34)
    upper = cost / eps_prime
    return GridParameters(
        delta_lower=lower,
        delta_upper=upper,
        radius=(1 + eps_prime) * upper,
        width=2 * eps_prime / (n * math.sqrt(d)) * lower,
    )


def advanced_grid(cost, delta, n, sample_size, eps_prime, l, d):
    lower = 2 * delta * n / (4 * sample_size) * (cost / 34)
    upper = cost / eps_prime
    return GridParameters(
        delta_lower=lower,
        delta_upper=upper,
        radius=4 * l / eps_prime * upper,
        width=2 * eps_prime / (n * math.sqrt(d)) * lower,
    )


def median5_grid(cost_bound, n, eps_prime, d):
    """cost_bound is Delta = cost(T, seed) / 34."""
    return GridParameters(
        delta_lower=cost_bound,
        delta_upper=34 * cost_bound,
        radius=(3 + 4 * eps_prime) / n * 34 * cost_bound,
        width=2 * eps_prime * cost_bound / (n * math.sqrt(d)),
    )


def simple_beta(k, epsilon):
    return 20 * k * k / epsilon + 2 * k


def advanced_beta(k, epsilon):
    return 12 * k * k / epsilon + 2 * k

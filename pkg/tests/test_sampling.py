import math

import numpy as np
import pytest

from core.errors import ParameterError
from core.sampling import (
    SampleScale,
    advanced_beta,
    advanced_grid,
    advanced_sample_size,
    child_rng,
    make_rng,
    median5_eval_size,
    median5_grid,
    median5_sample_size,
    seed_eval_size,
    seed_sample_size,
    simple_beta,
    simple_grid,
    simple_sample_size,
    subset_size,
)


def test_seed_sizes_at_half():
    assert seed_sample_size(0.5) == 3
    assert seed_eval_size(0.5) == 134


@pytest.mark.parametrize("delta", [0.0, 1.0, -0.1, 1.5])
def test_sizes_reject_bad_delta(delta):
    with pytest.raises(ParameterError):
        seed_sample_size(delta)


def test_betas():
    assert simple_beta(2, 0.1) == pytest.approx(804)
    assert advanced_beta(2, 0.1) == pytest.approx(484)
    assert simple_beta(1, 0.5) == pytest.approx(42)


def test_simple_sample_size():
    # -8 * 2 / 0.5 * (ln 0.5 - ln 4) = 32 ln 8
    assert simple_sample_size(2, 0.5, 0.5) == math.ceil(32 * math.log(8)) == 67


def test_advanced_sample_size():
    assert advanced_sample_size(1, 0.5, 0.1, 3) == (666, False)


def test_advanced_sample_size_substitutes_for_two_vertices(caplog):
    size, substituted = advanced_sample_size(1, 0.5, 0.1, 2)
    assert substituted
    assert size == math.ceil(160 * math.log(8)) == 333
    assert "substituting" in caplog.text


def test_median5_sizes():
    assert median5_sample_size(0.5, 0.5) == 9
    assert median5_eval_size(0.5, 0.5) == 1081


def test_subset_size():
    assert subset_size(67, 2) == 17
    assert subset_size(3, 10) == 1
    assert subset_size(4, 1) == 2
    assert subset_size(1, 0.5) == 1


def test_simple_grid():
    grid = simple_grid(cost=34, delta=0.5, n=10, sample_size=5, eps_prime=0.5, d=4)
    assert grid.delta_lower == pytest.approx(0.5)
    assert grid.delta_upper == pytest.approx(68)
    assert grid.radius == pytest.approx(102)
    assert grid.width == pytest.approx(0.025)


def test_advanced_grid_radius():
    grid = advanced_grid(cost=34, delta=0.5, n=10, sample_size=5, eps_prime=0.02, l=3, d=2)
    assert grid.delta_upper == pytest.approx(1700)
    assert grid.radius == pytest.approx(1_020_000)
    assert grid.delta_lower == pytest.approx(0.5)


def test_median5_grid():
    grid = median5_grid(cost_bound=1.0, n=10, eps_prime=0.5, d=4)
    assert grid.radius == pytest.approx(17)
    assert grid.width == pytest.approx(0.05)


def test_sample_scale():
    assert SampleScale().apply(134) == 134
    assert SampleScale.test(0.01).apply(134) == 2
    assert SampleScale.test(1e-6).apply(134) == 1
    with pytest.raises(ParameterError):
        SampleScale(factor=0.5)
    with pytest.raises(ParameterError):
        SampleScale.test(0.0)
    with pytest.raises(ParameterError):
        SampleScale(mode="fast")


def test_child_streams_are_independent_of_parent_state():
    a, b = make_rng(5), make_rng(5)
    b.integers(0, 100, size=50)
    assert np.array_equal(child_rng(a, 1, 2).random(4), child_rng(b, 1, 2).random(4))
    assert not np.array_equal(child_rng(a, 1).random(4), child_rng(a, 2).random(4))
    assert not np.array_equal(child_rng(a, 1).random(4), make_rng(5).random(4))
    nested = child_rng(child_rng(a, 1), 2)
    assert np.array_equal(nested.random(4), child_rng(a, 1, 2).random(4))

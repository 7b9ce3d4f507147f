import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mimkit.masking import (
    BlockMaskSpec,
    MaskSpec,
    apply_self_mask,
    draw_block_mask_spec,
    mask_probability,
)
from mimkit.tabular import SeedStream


def test_mask_probability_values():
    assert mask_probability(123.4, 0.0) == 0.5
    assert mask_probability(0.0, 2.0) == 0.5
    # oracle: 1 - 1/(1 + e^-2) computed with math
    assert mask_probability(1.0, 2.0) == pytest.approx(1 - 1 / (1 + math.exp(-2)), abs=1e-15)
    assert mask_probability(1.0, 2.0) == pytest.approx(0.1192, abs=1e-4)


def test_mcar_rate_at_lambda_zero():
    X = SeedStream(0).generator().standard_normal((10000, 5))
    d = apply_self_mask(X, MaskSpec.uniform(0.0, 5), SeedStream(1))
    assert np.all(np.abs(d.mask.mean(axis=0) - 0.5) <= 0.015)


def test_steep_lambda_masks_negatives():
    x = SeedStream(2).generator().standard_normal((5000, 1))
    d = apply_self_mask(x, MaskSpec.uniform(50.0, 1), SeedStream(3))
    agree = np.mean(d.mask[:, 0] == (x[:, 0] < 0))
    assert agree > 0.99
    assert abs(d.mask.mean() - 0.5) < 0.03


def test_same_seed_same_mask():
    X = SeedStream(4).generator().standard_normal((100, 3))
    a = apply_self_mask(X, MaskSpec.uniform(1.0, 3), SeedStream(9))
    b = apply_self_mask(X, MaskSpec.uniform(1.0, 3), SeedStream(9))
    assert np.array_equal(a.mask, b.mask)


def test_mcar_fixed_rate():
    X = np.zeros((20000, 2))
    d = apply_self_mask(X, MaskSpec.mcar(0.2, 2), SeedStream(0))
    assert np.all(np.abs(d.mask.mean(axis=0) - 0.2) < 3 * math.sqrt(0.16 / 20000))


def test_spec_validation():
    with pytest.raises(ValueError):
        MaskSpec(np.array([np.inf]))
    with pytest.raises(ValueError):
        MaskSpec.mcar(1.5, 2)
    with pytest.raises(ValueError):
        BlockMaskSpec(((0, 1), (1, 2)))
    with pytest.raises(ValueError):
        BlockMaskSpec.contiguous(2, 2, p_inf=1.2)


def test_block_extremes():
    spec = BlockMaskSpec.contiguous(5, 3, 2.0, p_inf=0.0)
    ms, truth = draw_block_mask_spec(spec, SeedStream(0))
    assert np.all(ms.per_feature_lambda == 0) and not truth.any()
    spec = BlockMaskSpec.contiguous(5, 3, 2.0, p_inf=1.0)
    ms, truth = draw_block_mask_spec(spec, SeedStream(0))
    assert np.all(ms.per_feature_lambda == 2.0) and truth.all()


def test_block_fraction_monte_carlo():
    spec = BlockMaskSpec.contiguous(20, 4, 2.0, p_inf=0.5)
    fracs = []
    for s in range(500):
        ms, _ = draw_block_mask_spec(spec, SeedStream(s))
        fracs.append(np.mean(ms.per_feature_lambda.reshape(20, 4)[:, 0] != 0))
    assert abs(np.mean(fracs) - 0.5) <= 0.07


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(1, 5), st.floats(0, 1), st.integers(0, 2**32))
def test_block_coherence(b, d, p_inf, seed):
    ms, truth = draw_block_mask_spec(BlockMaskSpec.contiguous(b, d, 2.0, p_inf), SeedStream(seed))
    lam = ms.per_feature_lambda.reshape(b, d)
    assert np.all(lam == lam[:, :1])
    assert np.array_equal(truth, ms.per_feature_lambda != 0)


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_calibration(lam):
    x = np.linspace(-2, 2, 50)
    X = np.tile(x[:, None], (1, 1))
    seeds = 2000
    total = sum(apply_self_mask(X, MaskSpec.uniform(lam, 1), SeedStream(s)).mask.mean() for s in range(seeds))
    expected = mask_probability(x, lam).mean()
    se = math.sqrt(0.25 / (seeds * x.size))
    assert abs(total / seeds - expected) < 4 * se


@settings(max_examples=20, deadline=None)
@given(st.floats(0.5, 5.0), st.integers(0, 2**32))
def test_monotonicity(lam, seed):
    x = SeedStream(seed).generator().standard_normal((2000, 1))
    d = apply_self_mask(x, MaskSpec.uniform(lam, 1), SeedStream(seed).child("m"))
    assert x[d.mask[:, 0], 0].mean() < x[~d.mask[:, 0], 0].mean()


def test_columns_use_independent_streams():
    X = np.zeros((1000, 2))
    d = apply_self_mask(X, MaskSpec.uniform(0.0, 2), SeedStream(0))
    assert not np.array_equal(d.mask[:, 0], d.mask[:, 1])

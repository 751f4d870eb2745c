import math

import numpy as np
import pytest

from stsc.channel import (
    ChannelRealization,
    FadingModel,
    apply_channel,
    draw_channel,
    noise_std_from_snr,
    transmit,
)
from stsc.rng import SplitMix64Stream


def test_slow_fading_reuses_matrix():
    ch = draw_channel(2, 2, 2, "slow", SplitMix64Stream(3))
    assert ch.H.shape == (2, 2, 2)
    np.testing.assert_array_equal(ch.H_per_use[0], ch.H_per_use[1])


def test_fast_fading_redraws():
    ch = draw_channel(2, 2, 2, FadingModel.FAST, SplitMix64Stream(3))
    assert not np.array_equal(ch.H_per_use[0], ch.H_per_use[1])


def test_single_use_slow_equals_fast():
    a = draw_channel(2, 2, 1, "slow", SplitMix64Stream(9))
    b = draw_channel(2, 2, 1, "fast", SplitMix64Stream(9))
    np.testing.assert_array_equal(a.H, b.H)


def test_rejects_degenerate_dims():
    with pytest.raises(ValueError):
        draw_channel(0, 2, 2, "slow", SplitMix64Stream(1))


def test_fading_power():
    rng = SplitMix64Stream(np.arange(100_000, dtype=np.uint64))
    H = draw_channel(1, 1, 1, "fast", rng).H
    assert 0.99 <= np.mean(np.abs(H) ** 2) <= 1.01


def test_numpy_generator_also_works():
    ch = draw_channel(2, 2, 2, "fast", np.random.default_rng(0))
    assert ch.H.shape == (2, 2, 2)


def test_noise_std_examples():
    assert noise_std_from_snr(0.0, 2) ** 2 == pytest.approx(2.0)
    assert noise_std_from_snr(10.0, 2) ** 2 == pytest.approx(0.2)
    assert noise_std_from_snr(math.inf) == 0.0
    assert noise_std_from_snr(200.0) < 1e-9


def test_transmit_identity_noiseless():
    X = np.array([[1 + 1j, -1 - 1j], [1 - 1j, 3 + 0j]])
    H = np.stack([np.eye(2), np.eye(2)]).astype(complex)
    Y = transmit(X, ChannelRealization(H, 0.0), SplitMix64Stream(1))
    np.testing.assert_array_equal(Y, X)


def test_transmit_columnwise_fast_fading():
    rng = SplitMix64Stream(5)
    ch = draw_channel(2, 2, 2, "fast", rng)
    X = np.array([[1 + 1j, -1 - 1j], [1 - 1j, 3 + 0j]])
    Y = transmit(X, ch, rng)
    for t in range(2):
        np.testing.assert_allclose(Y[:, t], ch.H_per_use[t] @ X[:, t], rtol=0, atol=1e-15)


def test_transmit_pure_noise_variance():
    sigma = noise_std_from_snr(3.0)
    rng = SplitMix64Stream(np.arange(50_000, dtype=np.uint64))
    ch = ChannelRealization(np.ones((50_000, 1, 2, 2), dtype=complex), sigma)
    Y = transmit(np.zeros((50_000, 2, 1)), ch, rng)
    # 10^5 complex samples
    assert np.mean(np.abs(Y) ** 2) == pytest.approx(sigma ** 2, rel=0.02)


def test_transmit_shape_mismatch():
    ch = draw_channel(2, 2, 2, "slow", SplitMix64Stream(1))
    with pytest.raises(ValueError):
        transmit(np.zeros((2, 1)), ch, SplitMix64Stream(1))


def test_transmit_deterministic():
    outs = []
    for _ in range(2):
        rng = SplitMix64Stream(77)
        ch = draw_channel(2, 2, 2, "fast", rng).with_noise_std(0.3)
        outs.append(transmit(np.ones((2, 2)), ch, rng))
    np.testing.assert_array_equal(*outs)


def test_apply_channel_matches_matmul():
    rng = np.random.default_rng(1)
    H = rng.normal(size=(5, 2, 3, 4)) + 1j * rng.normal(size=(5, 2, 3, 4))
    X = rng.normal(size=(5, 4, 2)) + 1j * rng.normal(size=(5, 4, 2))
    got = apply_channel(H, X)
    for b in range(5):
        for t in range(2):
            np.testing.assert_allclose(got[b, :, t], H[b, t] @ X[b, :, t], atol=1e-12)

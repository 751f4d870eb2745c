"""Rayleigh-fading MAC seen as a virtual MIMO channel, Y = H X + W.

Arrays may carry leading batch axes: H is (..., T, n_r, n_tx), X is
(..., n_tx, T) and Y is (..., n_r, T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class FadingModel(str, Enum):
    SLOW = "slow"
    FAST = "fast"

    @property
    def code(self) -> int:
        return 0 if self is FadingModel.SLOW else 1


def complex_normal(rng, shape) -> np.ndarray:
    """CN(0, 1) draws from a :class:`~stsc.rng.SplitMix64Stream` or a numpy Generator."""
    shape = tuple(shape)
    if hasattr(rng, "complex_normal"):
        return rng.complex_normal(shape)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


@dataclass
class ChannelRealization:
    H: np.ndarray  # (..., T, n_r, n_tx)
    noise_std: float = 0.0

    @property
    def T(self) -> int:
        return self.H.shape[-3]

    @property
    def n_r(self) -> int:
        return self.H.shape[-2]

    @property
    def n_tx(self) -> int:
        return self.H.shape[-1]

    @property
    def H_per_use(self) -> list[np.ndarray]:
        return [self.H[..., t, :, :] for t in range(self.T)]

    def with_noise_std(self, noise_std: float) -> "ChannelRealization":
        return ChannelRealization(self.H, noise_std)


def draw_channel(n_r: int, n_t_total: int, T: int, model, rng) -> ChannelRealization:
    """Draw i.i.d. CN(0, 1) fading; slow fading reuses one matrix for all T uses."""
    if min(n_r, n_t_total, T) < 1:
        raise ValueError("n_r, n_t_total and T must all be >= 1")
    model = FadingModel(model)
    if model is FadingModel.SLOW:
        h = complex_normal(rng, (1, n_r, n_t_total))
        H = np.repeat(h, T, axis=-3)
    else:
        H = complex_normal(rng, (T, n_r, n_t_total))
    return ChannelRealization(H)


def noise_std_from_snr(snr_db: float, n_helpers: int = 2) -> float:
    """Noise std per complex dimension for a per-helper unit-power convention.

    Received signal power per antenna is ``n_helpers``, so
    sigma**2 = n_helpers / 10**(snr_db / 10).
    """
    if snr_db == math.inf:
        return 0.0
    return math.sqrt(n_helpers / 10.0 ** (snr_db / 10.0))


def apply_channel(H: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Noise-free H_t X[:, t] for every use t.

    The sum over transmit antennas is written out term by term so results do
    not depend on batch size or BLAS kernels.
    """
    n_tx = H.shape[-1]
    # (..., T, n_r, n_tx) -> (..., n_r, T, n_tx)
    Ht = np.swapaxes(H, -3, -2)
    out = Ht[..., 0] * X[..., None, 0, :]
    for k in range(1, n_tx):
        out = out + Ht[..., k] * X[..., None, k, :]
    return out


def transmit(X, realization: ChannelRealization, rng) -> np.ndarray:
    """Return Y with Y[:, t] = H_t X[:, t] + w_t, w_t ~ CN(0, noise_std**2)."""
    X = np.asarray(X, dtype=complex)
    H = realization.H
    if X.shape[-2:] != (realization.n_tx, realization.T):
        raise ValueError(
            f"codeword shape {X.shape[-2:]} does not match channel "
            f"({realization.n_tx} tx, {realization.T} uses)")
    clean = apply_channel(H, X)
    w = complex_normal(rng, (realization.n_r, realization.T))
    return clean + realization.noise_std * w

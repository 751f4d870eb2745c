"""Exhaustive joint maximum-likelihood decoding over a codebook."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .channel import ChannelRealization
from .stcode import Codebook, enumerate_codebook


@dataclass(frozen=True)
class DecodeResult:
    index: int
    bits: tuple[str, str]
    metric: float


def ml_metrics(Y: np.ndarray, H: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Squared residuals sum_t ||Y[:, t] - H_t C[:, t]||^2 for every candidate.

    Y is (..., n_r, T), H is (..., T, n_r, n_tx), candidates is (N, n_tx, T).
    Returns (..., N).  The accumulation order is fixed (receive antenna, then
    use, then transmit antenna) so every trial is computed identically
    whatever the batch it sits in.
    """
    Y = np.asarray(Y)
    H = np.asarray(H)
    C = np.asarray(candidates)
    T, n_r, n_tx = H.shape[-3:]
    if Y.shape[-2:] != (n_r, T):
        raise ValueError(f"received block shape {Y.shape[-2:]} != ({n_r}, {T})")
    if C.ndim != 3 or C.shape[1:] != (n_tx, T):
        raise ValueError(f"candidates shape {C.shape} != (N, {n_tx}, {T})")
    total = None
    for r in range(n_r):
        for t in range(T):
            resid = Y[..., r, t, None] - H[..., t, r, 0, None] * C[:, 0, t]
            for k in range(1, n_tx):
                resid = resid - H[..., t, r, k, None] * C[:, k, t]
            sq = resid.real * resid.real + resid.imag * resid.imag
            total = sq if total is None else total + sq
    return total


def ml_decode_batch(Y, H, candidates) -> tuple[np.ndarray, np.ndarray]:
    """Argmin index (lowest index on ties) and metric, batched over leading axes."""
    m = ml_metrics(Y, H, candidates)
    idx = np.argmin(m, axis=-1)
    return idx, np.take_along_axis(m, idx[..., None], axis=-1)[..., 0]


def ml_decode(Y, realization: ChannelRealization, codebook: Codebook) -> DecodeResult:
    if len(codebook) == 0:
        raise ValueError("empty codebook")
    idx, metric = ml_decode_batch(Y, realization.H, codebook.matrices)
    i = int(idx)
    return DecodeResult(i, codebook.codewords[i].source_bits, float(metric))


class MLDetector(BaseEstimator):
    """Joint ML detector; ``fit`` loads the scheme's normalized codebook.

    ``predict(Y, H)`` returns codeword indices for batched received blocks;
    ``predict_bits`` returns the (b1, b2) fragment pairs.
    """

    def __init__(self, scheme="mac-golden"):
        self.scheme = scheme

    def fit(self, X=None, y=None):
        self.codebook_ = enumerate_codebook(self.scheme)
        return self

    def predict(self, Y, H):
        check_is_fitted(self, "codebook_")
        idx, _ = ml_decode_batch(Y, H, self.codebook_.matrices)
        return idx

    def predict_bits(self, Y, H):
        idx = np.atleast_1d(self.predict(Y, H))
        return [self.codebook_.codewords[i].source_bits for i in idx]

"""Gray-mapped QAM lifts and the 4-bit lift into Z[i][theta]."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_bit_matrix, check_bits
from .algebra import GaussInt, GoldenElem

_GRAY4 = {"00": -1 - 1j, "01": -1 + 1j, "11": 1 + 1j, "10": 1 - 1j}
_AXIS16 = {"00": -3, "01": -1, "11": 1, "10": 3}


@dataclass(frozen=True)
class Constellation:
    order: int
    points: tuple[tuple[str, complex], ...]

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1

    @property
    def average_energy(self) -> float:
        return sum(p.real ** 2 + p.imag ** 2 for _, p in self.points) / self.order

    def as_arrays(self) -> tuple[list[str], np.ndarray]:
        labels = [b for b, _ in self.points]
        return labels, np.array([p for _, p in self.points], dtype=complex)


def gray4(bits) -> complex:
    """4-QAM point in {+-1 +-1i}."""
    return _GRAY4[check_bits(bits, 2)]


def gray16(bits) -> complex:
    """16-QAM point on the {+-1, +-3}^2 grid; first two bits pick the real axis."""
    s = check_bits(bits, 4)
    return complex(_AXIS16[s[:2]], _AXIS16[s[2:]])


def _table(order: int, mapper) -> Constellation:
    k = order.bit_length() - 1
    labels = ["".join(p) for p in product("01", repeat=k)]
    return Constellation(order, tuple((b, mapper(b)) for b in labels))


QAM4 = _table(4, gray4)
QAM16 = _table(16, gray16)


def constellation(order: int) -> Constellation:
    try:
        return {4: QAM4, 16: QAM16}[order]
    except KeyError:
        raise ValueError(f"unsupported constellation order {order}; use 4 or 16") from None


def lift_golden(bits) -> GoldenElem:
    """Lift 4 bits to x1 + x2*theta with x1, x2 Gray 4-QAM symbols."""
    s = check_bits(bits, 4)
    return GoldenElem(GaussInt.coerce(gray4(s[:2])), GaussInt.coerce(gray4(s[2:])))


def delift_golden(x: GoldenElem) -> str:
    inv = {GaussInt.coerce(v): k for k, v in _GRAY4.items()}
    try:
        return inv[x.a] + inv[x.b]
    except KeyError:
        raise ValueError(f"{x} is not in the image of lift_golden") from None


def demap(const: Constellation, point: complex) -> str:
    """Nearest-point demapping; ties go to the lexicographically smallest label."""
    best = min(const.points, key=lambda bp: (abs(point - bp[1]) ** 2, bp[0]))
    return best[0]


class GrayQAMModulator(TransformerMixin, BaseEstimator):
    """Bits-to-symbols transformer over a Gray-mapped QAM constellation.

    ``transform`` takes an (n, log2(order)) 0/1 array and returns n complex
    symbols; ``inverse_transform`` hard-demaps symbols back to bits.
    """

    def __init__(self, order=4, scale=1.0):
        self.order = order
        self.scale = scale

    def fit(self, X=None, y=None):
        const = constellation(self.order)
        labels, pts = const.as_arrays()
        self.constellation_ = const
        self.bits_per_symbol_ = const.bits_per_symbol
        self.labels_ = np.array([[int(c) for c in b] for b in labels], dtype=np.int64)
        self.points_ = pts * self.scale
        return self

    def transform(self, X):
        check_is_fitted(self, "points_")
        bits = check_bit_matrix(X, self.bits_per_symbol_)
        weights = 1 << np.arange(self.bits_per_symbol_ - 1, -1, -1)
        return self.points_[bits @ weights]

    def inverse_transform(self, X):
        check_is_fitted(self, "points_")
        sym = np.asarray(X, dtype=complex).ravel()
        dist = np.abs(sym[:, None] - self.points_[None, :]) ** 2
        # labels_ is in lexicographic order, so argmin's first-hit rule is the tie-break
        return self.labels_[np.argmin(dist, axis=1)]

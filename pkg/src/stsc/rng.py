"""Counter-based SplitMix64 streams, vectorized over many independent seeds.

Every Monte Carlo trial owns a SplitMix64 generator whose seed is derived by
folding (master seed, scheme, fading, SNR, trial index) through the
SplitMix64 finalizer.  Output j of a generator seeded with ``s`` is
``mix(s + (j + 1) * GAMMA)``, so a batch of trials can be advanced together
and each trial still sees exactly the numbers it would see on its own.
"""

from __future__ import annotations

import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TWO_PI = 2.0 * np.pi


def mix64(z) -> np.ndarray:
    """SplitMix64 finalizer on uint64 arrays (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _as_u64(value) -> np.ndarray:
    if isinstance(value, (float, np.floating)):
        return np.float64(value).view(np.uint64)
    if isinstance(value, int):
        value &= 0xFFFFFFFFFFFFFFFF
    arr = np.asarray(value)
    if arr.dtype.kind not in "iu":
        raise TypeError(f"cannot fold {value!r} into a seed")
    return arr.astype(np.uint64)


def derive_seed(*parts) -> np.ndarray:
    """Fold integers (or float64 bit patterns) into one 64-bit seed.

    The last part may be an integer array; the result then has its shape.
    """
    h = np.uint64(0)
    with np.errstate(over="ignore"):
        for p in parts:
            h = mix64(h + GAMMA) ^ _as_u64(p)
        return mix64(h + GAMMA)


class SplitMix64Stream:
    """A batch of SplitMix64 generators advanced in lockstep.

    ``seeds`` is a scalar (one generator) or a 1-D array (one per trial);
    draws come back with the batch axis first when ``seeds`` is an array.
    """

    def __init__(self, seeds):
        self.seeds = np.asarray(seeds, dtype=np.uint64)
        self.counter = 0

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.seeds.shape

    def next_uint64(self, n: int) -> np.ndarray:
        steps = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        with np.errstate(over="ignore"):
            state = self.seeds[..., None] + steps * GAMMA
        return mix64(state)

    def uniform(self, n: int) -> np.ndarray:
        """Doubles in (0, 1]."""
        return ((self.next_uint64(n) >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0 ** -53

    def complex_normal(self, shape) -> np.ndarray:
        """Circularly-symmetric CN(0, 1) samples via Box-Muller, two draws each."""
        shape = tuple(np.atleast_1d(shape).tolist()) if not isinstance(shape, tuple) else shape
        n = int(np.prod(shape, dtype=np.int64))
        u = self.uniform(2 * n)
        r = np.sqrt(-np.log(u[..., 0::2]))  # sqrt(-2 ln u) / sqrt(2)
        phase = _TWO_PI * u[..., 1::2]
        z = r * np.cos(phase) + 1j * (r * np.sin(phase))
        return z.reshape(self.batch_shape + shape)

    def bits(self, n: int) -> np.ndarray:
        """Top ``n`` bits (n <= 64) of one draw, as an integer array."""
        if not 1 <= n <= 64:
            raise ValueError("can take 1..64 bits from one draw")
        v = self.next_uint64(1)[..., 0] >> np.uint64(64 - n)
        return v.astype(np.int64)

"""Input checking shared by the public functions and estimators."""

from __future__ import annotations

import numpy as np


def check_bits(bits, length: int | None = None, name: str = "bits") -> str:
    """Normalize a bit string (str or sequence of 0/1) to a ``str`` of '0'/'1'."""
    if isinstance(bits, str):
        s = bits
    else:
        try:
            s = "".join(str(int(b)) for b in bits)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"{name} is not a bit sequence: {bits!r}") from exc
    if set(s) - {"0", "1"}:
        raise ValueError(f"{name} must contain only 0/1, got {bits!r}")
    if length is not None and len(s) != length:
        raise ValueError(f"{name} must have {length} bits, got {len(s)}")
    return s


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_bit_matrix(X, width: int) -> np.ndarray:
    """Validate a 2-D 0/1 array with ``width`` columns (one bit string per row)."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != width:
        raise ValueError(f"expected an (n, {width}) bit array, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("bit array must contain only 0/1")
    return arr.astype(np.int64)


def bits_to_int(bits: str) -> int:
    return int(bits, 2) if bits else 0


def int_to_bits(value: int, width: int) -> str:
    return format(value, f"0{width}b")

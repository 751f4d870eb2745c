"""Repair-transmission space-time codes for two helpers.

Three schemes are built here:

* ``ssm``  - each helper sends one Gray 16-QAM symbol in a single channel use.
* ``dsm``  - each helper sends two Gray 4-QAM symbols over two channel uses.
* ``mac-golden`` / ``mac-golden-notwist`` - each helper lifts its 4 bits to
  x = x1 + x2*theta and sends (alpha*x, tau(alpha)*tau(x)); the twisted
  variant multiplies the second helper's first entry by i.

Codeword matrices have one row per helper (virtual transmit antenna) and
one column per channel use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_bit_matrix, check_bits
from .algebra import I, GaussInt, GoldenElem, div_sqrt5, embed, golden_mul, tau
from .modulation import gray4, gray16, lift_golden

ALPHA = GoldenElem(GaussInt(1, 1), GaussInt(0, -1))  # 1 + i - i*theta
TAU_ALPHA = tau(ALPHA)  # 1 + i*theta

ZERO_TOL = 1e-9


@dataclass(frozen=True)
class Scheme:
    """Physical-layer repair scheme for K=2 single-antenna helpers."""

    kind: str  # "ssm" | "dsm" | "mac-golden"
    twist: bool = False

    def __post_init__(self):
        if self.kind not in ("ssm", "dsm", "mac-golden"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.twist and self.kind != "mac-golden":
            raise ValueError("only the MAC golden code takes a twist")

    @classmethod
    def from_name(cls, name: str) -> "Scheme":
        try:
            return SCHEMES[name]
        except KeyError:
            raise ValueError(
                f"unknown scheme {name!r}; choose from {sorted(SCHEMES)}") from None

    @property
    def name(self) -> str:
        if self.kind == "mac-golden":
            return "mac-golden" if self.twist else "mac-golden-notwist"
        return self.kind

    @property
    def n_helpers(self) -> int:
        return 2

    @property
    def n_t(self) -> int:
        return 1

    @property
    def T(self) -> int:
        return 1 if self.kind == "ssm" else 2

    @property
    def bits_per_helper(self) -> int:
        return 4

    @property
    def total_bits(self) -> int:
        return self.n_helpers * self.bits_per_helper

    def __str__(self):
        return self.name


SCHEMES = {
    "ssm": Scheme("ssm"),
    "dsm": Scheme("dsm"),
    "mac-golden": Scheme("mac-golden", twist=True),
    "mac-golden-notwist": Scheme("mac-golden", twist=False),
}


@dataclass(frozen=True)
class Codeword:
    matrix: np.ndarray
    source_bits: tuple[str, ...]
    exact_form: tuple[tuple[GoldenElem, ...], ...] | None = None

    @property
    def shape(self):
        return self.matrix.shape


def encode_dsm(b1, b2) -> Codeword:
    b1, b2 = check_bits(b1, 4, "b1"), check_bits(b2, 4, "b2")
    m = np.array([[gray4(b[:2]), gray4(b[2:])] for b in (b1, b2)], dtype=complex)
    return Codeword(m, (b1, b2))


def encode_ssm(b1, b2) -> Codeword:
    b1, b2 = check_bits(b1, 4, "b1"), check_bits(b2, 4, "b2")
    m = np.array([[gray16(b1)], [gray16(b2)]], dtype=complex)
    return Codeword(m, (b1, b2))


def mac_golden_exact(x1: GoldenElem, x2: GoldenElem, twist: bool):
    """Exact 2x2 codeword entries for lifted symbols x1, x2."""
    w = GoldenElem(I) if twist else GoldenElem(GaussInt(1))
    return (
        (golden_mul(ALPHA, x1), golden_mul(TAU_ALPHA, tau(x1))),
        (golden_mul(w, golden_mul(ALPHA, x2)), golden_mul(TAU_ALPHA, tau(x2))),
    )


def encode_mac_golden(b1, b2, twist: bool = True) -> Codeword:
    b1, b2 = check_bits(b1, 4, "b1"), check_bits(b2, 4, "b2")
    exact = mac_golden_exact(lift_golden(b1), lift_golden(b2), twist)
    m = np.array([[embed(e) for e in row] for row in exact], dtype=complex)
    return Codeword(m, (b1, b2), exact)


def encode(scheme: Scheme, b1, b2) -> Codeword:
    """Unnormalized codeword of ``scheme`` for helper fragments b1, b2."""
    if scheme.kind == "ssm":
        return encode_ssm(b1, b2)
    if scheme.kind == "dsm":
        return encode_dsm(b1, b2)
    return encode_mac_golden(b1, b2, scheme.twist)


def assemble_block(inner, conjugates) -> np.ndarray:
    """Stack K inner n_t x n_t matrices into the K*n_t x d*n_t repair block.

    Block (j, m) is ``conjugates[m]`` applied entrywise to ``inner[j]``.
    Entries may be numbers or exact ring elements; the result has object
    dtype unless every entry is numeric.
    """
    mats = [np.asarray(x, dtype=object) for x in inner]
    if not mats:
        raise ValueError("need at least one inner matrix")
    if not conjugates:
        raise ValueError("need at least one conjugation map")
    n_t = mats[0].shape[0]
    for x in mats:
        if x.ndim != 2 or x.shape != (n_t, n_t):
            raise ValueError(f"inner matrices must all be {n_t}x{n_t}, got {x.shape}")
    K, d = len(mats), len(conjugates)
    out = np.empty((K * n_t, d * n_t), dtype=object)
    for j, x in enumerate(mats):
        for m, conj in enumerate(conjugates):
            out[j * n_t:(j + 1) * n_t, m * n_t:(m + 1) * n_t] = [
                [conj(e) for e in row] for row in x]
    if all(isinstance(e, (int, float, complex, np.number)) for e in out.flat):
        return out.astype(complex)
    return out


def lrr(coords, gamma, sigma=lambda x: x) -> np.ndarray:
    """Left regular representation of sum_k e**k * x_k in a cyclic algebra.

    The algebra has e**n = gamma and x*e = e*sigma(x).  Column j holds the
    coordinates of a*e**j; entries on or below the diagonal are
    sigma**j(x_{i-j}), entries above pick up the factor gamma.
    """
    xs = list(coords)
    n = len(xs)
    if n < 1:
        raise ValueError("need at least one coordinate")
    if gamma == 0:
        raise ValueError("gamma must be nonzero")

    def sig_pow(x, j):
        for _ in range(j):
            x = sigma(x)
        return x

    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            if i >= j:
                out[i, j] = sig_pow(xs[i - j], j)
            else:
                out[i, j] = gamma * sig_pow(xs[n + i - j], j)
    try:
        return out.astype(complex)
    except TypeError:
        return out


@dataclass(frozen=True)
class Codebook:
    """All 2**8 codewords of a scheme, in lexicographic (b1, b2) order.

    ``matrices`` is normalized by ``normalization``; ``raw`` is not.
    """

    scheme: Scheme
    codewords: tuple[Codeword, ...]
    normalization: float
    matrices: np.ndarray = field(repr=False)
    raw: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.codewords)

    @property
    def bits(self) -> list[tuple[str, str]]:
        return [c.source_bits for c in self.codewords]

    def index_of(self, b1: str, b2: str) -> int:
        return int(b1, 2) * 16 + int(b2, 2)

    def mean_energy_per_use_per_helper(self) -> float:
        K, T = self.scheme.n_helpers, self.scheme.T
        return float(np.mean(np.sum(np.abs(self.matrices) ** 2, axis=(1, 2))) / (K * T))


_CODEBOOK_CACHE: dict[Scheme, Codebook] = {}


def enumerate_codebook(scheme: Scheme | str) -> Codebook:
    """Enumerate and normalize the full codebook (cached; codebooks are immutable)."""
    if isinstance(scheme, str):
        scheme = Scheme.from_name(scheme)
    if scheme in _CODEBOOK_CACHE:
        return _CODEBOOK_CACHE[scheme]
    labels = ["".join(p) for p in product("01", repeat=scheme.bits_per_helper)]
    words = tuple(encode(scheme, b1, b2) for b1 in labels for b2 in labels)
    raw = np.stack([w.matrix for w in words])
    K, T = scheme.n_helpers, scheme.T
    mean_energy = np.mean(np.sum(np.abs(raw) ** 2, axis=(1, 2))) / (K * T)
    scale = float(1.0 / np.sqrt(mean_energy))
    mats = raw * scale
    raw.setflags(write=False)
    mats.setflags(write=False)
    book = Codebook(scheme, words, scale, mats, raw)
    _CODEBOOK_CACHE[scheme] = book
    return book


# --- determinant checks -----------------------------------------------------

def _det(m):
    """Determinant by cofactor expansion; works for any commutative ring entries."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _gram(rows, conj):
    return [[sum((a * conj(b) for a, b in zip(r, s)), start=0 * r[0]) for s in rows]
            for r in rows]


def subset_det(S, exact: bool = False):
    """|det S| for square S, else det(S S^H); exact when entries are GoldenElems.

    Returns the exact ring element (exact=True) or a nonnegative float.
    """
    rows = [list(r) for r in S]
    square = len(rows) == len(rows[0])
    if exact:
        return _det(rows) if square else _det(_gram(rows, lambda e: e.conjugate()))
    arr = np.asarray(S, dtype=complex)
    if square:
        return float(abs(np.linalg.det(arr)))
    return float(abs(np.linalg.det(arr @ arr.conj().T)))


def _numeric_subset_dets(stack: np.ndarray, rows: tuple[int, ...]) -> np.ndarray:
    S = stack[:, list(rows), :]
    if S.shape[1] == S.shape[2]:
        return np.abs(np.linalg.det(S))
    return np.abs(np.linalg.det(S @ np.conj(np.swapaxes(S, 1, 2))))


@dataclass
class CnvdEntry:
    j: int
    quantity: str  # "absdet" for square S, "absdet_gram" for det(S S^H)
    evaluated: int
    zero_count: int
    min_nonzero_absdet: float | None
    min_nonzero_absdet_numeric: float | None
    witness: tuple | None
    witness_subset: tuple[int, ...] | None
    exact: bool
    det_over_sqrt5_gaussian: bool | None = None

    def to_dict(self) -> dict:
        d = {
            "j": self.j,
            "quantity": self.quantity,
            "evaluated": self.evaluated,
            "zero_count": self.zero_count,
            "min_nonzero_absdet": self.min_nonzero_absdet,
            "min_nonzero_absdet_numeric": self.min_nonzero_absdet_numeric,
            "exact": self.exact,
            "witness_helpers": list(self.witness_subset) if self.witness_subset else None,
            "witness_b1": None,
            "witness_b2": None,
        }
        if self.witness is not None:
            first = self.witness[0]
            d["witness_b1"], d["witness_b2"] = first
            if len(self.witness) > 1:
                d["witness_other_b1"], d["witness_other_b2"] = self.witness[1]
        if self.det_over_sqrt5_gaussian is not None:
            d["det_over_sqrt5_gaussian"] = self.det_over_sqrt5_gaussian
        return d


@dataclass
class CnvdReport:
    scheme: str
    mode: str
    normalization: float
    normalized: bool
    per_j: list[CnvdEntry]

    @property
    def kappa(self) -> float | None:
        """Smallest nonzero value over all subset sizes."""
        vals = [e.min_nonzero_absdet for e in self.per_j if e.min_nonzero_absdet is not None]
        return min(vals) if vals else None

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "mode": self.mode,
            "normalization": self.normalization,
            "normalized": self.normalized,
            "per_j": [e.to_dict() for e in self.per_j],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _is_gaussian(x: GoldenElem) -> bool:
    return x.b.is_zero()


def cnvd_check(codebook: Codebook, mode: str = "over-codewords",
               normalized: bool = False) -> CnvdReport:
    """Scan every j-helper submatrix of every codeword (or codeword difference).

    Square submatrices contribute |det S|; non-square ones |det(S S^H)|.
    Values are zero below ``ZERO_TOL`` on the numeric path; when exact forms
    exist they are authoritative and the numeric value is kept as a cross-check.
    With ``normalized`` the reported magnitudes include the codebook scale.
    """
    if mode not in ("over-codewords", "over-differences"):
        raise ValueError(f"unknown mode {mode!r}")
    if len(codebook) == 0:
        raise ValueError("empty codebook")
    scheme = codebook.scheme
    words = codebook.codewords
    exact = all(w.exact_form is not None for w in words)
    if mode == "over-codewords":
        items = [(i,) for i in range(len(words))]
        stack = codebook.raw
    else:
        items = list(combinations(range(len(words)), 2))
        a, b = np.array(items).T
        stack = codebook.raw[a] - codebook.raw[b]

    exact_items = [_exact_diff(words, item) for item in items] if exact else None
    K, T = scheme.n_helpers * scheme.n_t, scheme.T
    scale = codebook.normalization if normalized else 1.0
    per_j = []
    for j in range(1, scheme.n_helpers + 1):
        square = j == T
        # |det S| scales by scale**j, det(S S^H) by scale**(2j)
        factor = scale ** (j if square else 2 * j)
        best = None  # (value, numeric value, item index, subset)
        zero_count = 0
        evaluated = 0
        sqrt5_ok = True if (exact and square) else None
        for rows in combinations(range(K), j):
            numeric = _numeric_subset_dets(stack, rows)
            for idx, item in enumerate(items):
                evaluated += 1
                if exact:
                    ex = [list(exact_items[idx][r]) for r in rows]
                    val = subset_det(ex, exact=True)
                    if val.is_zero():
                        zero_count += 1
                        continue
                    if sqrt5_ok is not None:
                        try:
                            sqrt5_ok = sqrt5_ok and _is_gaussian(div_sqrt5(val))
                        except ArithmeticError:
                            sqrt5_ok = False
                    mag = abs(embed(val))
                else:
                    mag = float(numeric[idx])
                    if mag < ZERO_TOL:
                        zero_count += 1
                        continue
                if best is None or mag < best[0]:
                    best = (mag, float(numeric[idx]), item, rows)
        witness = None
        if best is not None:
            witness = tuple(words[i].source_bits for i in best[2])
        per_j.append(CnvdEntry(
            j=j,
            quantity="absdet" if square else "absdet_gram",
            evaluated=evaluated,
            zero_count=zero_count,
            min_nonzero_absdet=None if best is None else best[0] * factor,
            min_nonzero_absdet_numeric=None if best is None else best[1] * factor,
            witness=witness,
            witness_subset=None if best is None else tuple(r + 1 for r in best[3]),
            exact=exact,
            det_over_sqrt5_gaussian=sqrt5_ok,
        ))
    return CnvdReport(scheme.name, mode, codebook.normalization, normalized, per_j)


def _exact_diff(words, item):
    if len(item) == 1:
        return words[item[0]].exact_form
    x, y = words[item[0]].exact_form, words[item[1]].exact_form
    return tuple(tuple(a - b for a, b in zip(rx, ry)) for rx, ry in zip(x, y))


def evaluate_witness(codebook: Codebook, entry: CnvdEntry) -> float:
    """Recompute the reported minimum from the witness alone."""
    helpers = [h - 1 for h in entry.witness_subset]
    mats = [codebook.raw[codebook.index_of(*bits)] for bits in entry.witness]
    m = mats[0] if len(mats) == 1 else mats[0] - mats[1]
    return subset_det(m[helpers, :])


class SpaceTimeEncoder(TransformerMixin, BaseEstimator):
    """Map rows of 8 bits (b1 || b2) to normalized codeword matrices."""

    def __init__(self, scheme="mac-golden", normalize=True):
        self.scheme = scheme
        self.normalize = normalize

    def fit(self, X=None, y=None):
        self.codebook_ = enumerate_codebook(self.scheme)
        self.n_bits_ = self.codebook_.scheme.total_bits
        return self

    def transform(self, X):
        check_is_fitted(self, "codebook_")
        bits = check_bit_matrix(X, self.n_bits_)
        idx = bits @ (1 << np.arange(self.n_bits_ - 1, -1, -1))
        book = self.codebook_.matrices if self.normalize else self.codebook_.raw
        return book[idx]

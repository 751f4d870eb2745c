"""Single-parity (n, n-1) storage code: encode, XOR repair, reconstruction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from ._validation import check_bits


def xor_bits(*fragments: str) -> str:
    if not fragments:
        raise ValueError("need at least one fragment")
    m = len(fragments[0])
    if any(len(f) != m for f in fragments):
        raise ValueError("fragments must all have the same length")
    value = reduce(lambda acc, f: acc ^ int(f, 2), fragments, 0) if m else 0
    return format(value, f"0{m}b") if m else ""


@dataclass(frozen=True)
class Fragment:
    node_id: int
    bits: str

    def __post_init__(self):
        object.__setattr__(self, "bits", check_bits(self.bits, name="fragment"))
        if self.node_id < 1:
            raise ValueError(f"node ids start at 1, got {self.node_id}")


@dataclass(frozen=True)
class StorageSystem:
    fragments: tuple[Fragment, ...]

    @property
    def n(self) -> int:
        return len(self.fragments)

    @property
    def k(self) -> int:
        return self.n - 1

    @property
    def d(self) -> int:
        return self.n - 1

    @property
    def m(self) -> int:
        return len(self.fragments[0].bits)

    def fragment(self, node_id: int) -> Fragment:
        return self.fragments[node_id - 1]

    def parity_ok(self) -> bool:
        return set(xor_bits(*(f.bits for f in self.fragments))) <= {"0"}


def encode_storage(data_fragments) -> StorageSystem:
    """Nodes 1..k hold the data, node k+1 holds their XOR."""
    data = [check_bits(f, name="data fragment") for f in data_fragments]
    if not data:
        raise ValueError("need k >= 1 data fragments")
    if len({len(f) for f in data}) != 1:
        raise ValueError("data fragments must all have the same length")
    parity = xor_bits(*data)
    frags = [Fragment(i + 1, f) for i, f in enumerate(data)]
    frags.append(Fragment(len(data) + 1, parity))
    return StorageSystem(tuple(frags))


def repair(helper_fragments, failed_id: int, n: int | None = None) -> Fragment:
    """Rebuild the failed node's fragment as the XOR of all d = n-1 helpers.

    ``helper_fragments`` may be bit strings or :class:`Fragment` objects.  When
    ``n`` is omitted it is taken to be ``len(helper_fragments) + 1``.
    """
    helpers = [h.bits if isinstance(h, Fragment) else check_bits(h, name="helper")
               for h in helper_fragments]
    if n is None:
        n = len(helpers) + 1
    if len(helpers) != n - 1:
        raise ValueError(f"repair needs exactly d={n - 1} helpers, got {len(helpers)}")
    if not 1 <= failed_id <= n:
        raise ValueError(f"failed node id {failed_id} outside [1, {n}]")
    ids = [h.node_id for h in helper_fragments if isinstance(h, Fragment)]
    if failed_id in ids:
        raise ValueError(f"node {failed_id} cannot help repair itself")
    return Fragment(failed_id, xor_bits(*helpers))


def reconstruct(fragments, n: int | None = None) -> list[str]:
    """Recover data fragments 1..k from any k distinct nodes."""
    frags = list(fragments)
    if n is None:
        n = len(frags) + 1
    k = n - 1
    ids = [f.node_id for f in frags]
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate node ids: {ids}")
    if len(frags) < k:
        raise ValueError(f"need {k} fragments to reconstruct, got {len(frags)}")
    if any(not 1 <= i <= n for i in ids):
        raise ValueError(f"node ids must lie in [1, {n}]")
    by_id = {f.node_id: f.bits for f in frags}
    missing = [i for i in range(1, k + 1) if i not in by_id]
    if missing:
        (lost,) = missing
        # exactly k-1 data nodes plus parity are present here
        by_id[lost] = xor_bits(*by_id.values())
    return [by_id[i] for i in range(1, k + 1)]

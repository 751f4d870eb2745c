import random
from itertools import combinations

import pytest

from stsc.storage import Fragment, encode_storage, reconstruct, repair, xor_bits


def test_encode_examples():
    assert encode_storage(["1010", "0110"]).fragment(3).bits == "1100"
    assert encode_storage(["0000", "0000"]).fragment(3).bits == "0000"
    sys4 = encode_storage(["1111", "0000", "1010"])
    assert sys4.fragment(4).bits == "0101"
    assert (sys4.n, sys4.k, sys4.d, sys4.m) == (4, 3, 3, 4)
    assert sys4.parity_ok()


def test_encode_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        encode_storage(["101", "1010"])
    with pytest.raises(ValueError):
        encode_storage([])


def test_repair_examples():
    # toy three-node system: a = 1010, b = 0110, c = a + b = 1100
    assert repair(["0110", "1100"], failed_id=1).bits == "1010"
    assert repair(["0000", "0000"], failed_id=2).bits == "0000"
    assert repair(["1111", "1010", "0101"], failed_id=2, n=4).bits == "0000"


def test_repair_rejects_wrong_helper_count():
    with pytest.raises(ValueError):
        repair(["0110"], failed_id=1, n=3)
    with pytest.raises(ValueError):
        repair(["0110", "1100", "0000"], failed_id=1, n=3)


def test_repair_rejects_self_help():
    with pytest.raises(ValueError):
        repair([Fragment(1, "0110"), Fragment(2, "1100")], failed_id=1, n=3)


def test_reconstruct_examples():
    a, b = "1010", "0110"
    assert reconstruct([Fragment(1, a), Fragment(2, b)]) == [a, b]
    assert reconstruct([Fragment(2, "0110"), Fragment(3, "1100")]) == [a, b]
    assert reconstruct([Fragment(1, "1010"), Fragment(3, "1100")]) == [a, b]


def test_reconstruct_errors():
    with pytest.raises(ValueError):
        reconstruct([Fragment(1, "1010"), Fragment(1, "1010")])
    with pytest.raises(ValueError):
        reconstruct([Fragment(1, "1010")], n=3)


def test_repair_property_random():
    rng = random.Random(5)
    for _ in range(1000):
        n = rng.choice([3, 4, 5])
        m = rng.choice([4, 8, 16])
        data = ["".join(rng.choice("01") for _ in range(m)) for _ in range(n - 1)]
        system = encode_storage(data)
        assert system.parity_ok()
        failed = rng.randint(1, n)
        helpers = [f for f in system.fragments if f.node_id != failed]
        assert repair(helpers, failed, n=n) == system.fragment(failed)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_reconstruct_every_subset(n):
    rng = random.Random(n)
    data = ["".join(rng.choice("01") for _ in range(8)) for _ in range(n - 1)]
    system = encode_storage(data)
    for subset in combinations(system.fragments, n - 1):
        assert reconstruct(subset, n=n) == data


def test_xor_bits():
    assert xor_bits("1100", "1010", "0110") == "0000"
    with pytest.raises(ValueError):
        xor_bits("1", "10")

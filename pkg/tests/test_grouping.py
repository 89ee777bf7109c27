import numpy as np
import pytest

from codespace_vqe.grouping import CommutingGroup, Partition, extract_z_group, order_groups, partition
from codespace_vqe.instances import random_hamiltonian
from codespace_vqe.pauli import PauliSum, commutes, is_diagonal, parse_pauli

G1 = ["I", "Z0", "Z1", "Z2", "Z3", "Z0 Z1", "Z0 Z2", "Z0 Z3", "Z1 Z2", "Z1 Z3", "Z2 Z3"]
G2 = ["Y0 X1 X2 Y3", "Y0 Y1 X2 X3", "X0 X1 Y2 Y3", "X0 Y1 Y2 X3"]


def members(group):
    return {(t.string.to_text(), t.coefficient) for t in group.terms}


def check_partition(h, p):
    union = sorted((t.string.x, t.string.z, t.coefficient) for g in p for t in g.terms)
    assert union == sorted((t.string.x, t.string.z, t.coefficient) for t in h)
    for g in p:
        strings = g.terms.strings
        for i, a in enumerate(strings):
            for b in strings[i + 1 :]:
                assert commutes(a, b)
    assert len(p) <= len(h)


def test_extract_z_group(h2):
    z, rest = extract_z_group(h2.operator)
    assert len(z) == 11 and len(rest) == 4 and z.is_z_only
    assert {t.string.to_text() for t in z.terms} == set(G1)


def test_extract_all_diagonal_and_none():
    h = PauliSum.from_terms(2, [(1.0, parse_pauli("Z0", 2)), (0.5, parse_pauli("Z0 Z1", 2))])
    z, rest = extract_z_group(h)
    assert z.terms == h and len(rest) == 0
    h = PauliSum.from_terms(2, [(1.0, parse_pauli("X0", 2))])
    z, rest = extract_z_group(h)
    assert len(z) == 0 and z.is_z_only and rest == h


def test_h2_partition(h2):
    p = order_groups(partition(h2.operator))
    assert len(p) == 2
    assert {s for s, _ in members(p[0])} == set(G1)
    assert {s for s, _ in members(p[1])} == set(G2)
    assert p[0].is_z_only and not p[1].is_z_only
    check_partition(h2.operator, p)


def test_single_term():
    h = PauliSum.from_terms(3, [(0.3, parse_pauli("X0 Y2", 3))])
    assert len(partition(h)) == 1
    with pytest.raises(ValueError):
        partition(PauliSum(3))


def test_random_partitions(rng):
    for _ in range(100):
        n = int(rng.integers(1, 6))
        h = random_hamiltonian(n, int(rng.integers(1, 26)), rng)
        p = partition(h)
        check_partition(h, p)
        if any(is_diagonal(s) for s in h.strings):
            assert p[0].is_z_only
        check_partition(h, order_groups(p))


def test_random_4q_20_terms(rng):
    h = random_hamiltonian(4, 20, rng)
    check_partition(h, partition(h))


def _group(texts, coeffs, index):
    return CommutingGroup(PauliSum.from_terms(2, [(c, parse_pauli(t, 2)) for t, c in zip(texts, coeffs)]), index)


def test_order_by_descending_norm():
    z = CommutingGroup(PauliSum.from_terms(2, [(1.0, parse_pauli("Z0", 2))]), 1, True)
    a, b, c = _group(["X0"], [0.2], 2), _group(["X1"], [0.9], 3), _group(["Y0"], [0.5], 4)
    out = order_groups(Partition((z, a, b, c), ""))
    assert [g.one_norm for g in out] == [1.0, 0.9, 0.5, 0.2]


def test_order_ties_stable():
    a, b = _group(["X0"], [0.5], 2), _group(["X1"], [-0.5], 3)
    assert [g.index for g in order_groups(Partition((a, b), ""))] == [2, 3]


def test_group_rejects_anticommuting():
    with pytest.raises(ValueError):
        _group(["X0", "Z0"], [1, 1], 1)

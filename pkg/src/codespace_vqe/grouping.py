"""Partition a Pauli-sum Hamiltonian into mutually commuting groups.

The diagonal (Z/I-only) terms always form the first group. Everything else
is assigned by sorted insertion under general (full-operator) commutativity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pauli import PauliSum, PauliTerm, commutes, is_diagonal, one_norm

__all__ = ["CommutingGroup", "Partition", "extract_z_group", "partition", "order_groups"]


@dataclass(frozen=True)
class CommutingGroup:
    terms: PauliSum
    index: int
    is_z_only: bool = False

    def __post_init__(self):
        strings = self.terms.strings
        for i, a in enumerate(strings):
            for b in strings[i + 1 :]:
                if not commutes(a, b):
                    raise ValueError(f"{a.to_text()} and {b.to_text()} anticommute")
        if self.is_z_only and not all(is_diagonal(s) for s in strings):
            raise ValueError("z-only group holds an off-diagonal term")

    @property
    def n_qubits(self) -> int:
        return self.terms.n_qubits

    @property
    def one_norm(self) -> float:
        return one_norm(self.terms)

    def __len__(self):
        return len(self.terms)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "is_z_only": self.is_z_only,
            "one_norm": self.one_norm,
            "terms": [[t.coefficient, t.string.to_text()] for t in self.terms],
        }


@dataclass(frozen=True)
class Partition:
    groups: tuple[CommutingGroup, ...]
    source_hash: str

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))

    def __len__(self):
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)

    def __getitem__(self, i):
        return self.groups[i]

    @property
    def n_qubits(self) -> int:
        return self.groups[0].n_qubits

    def to_dict(self) -> dict:
        return {"source_hash": self.source_hash, "groups": [g.to_dict() for g in self.groups]}


def extract_z_group(h: PauliSum) -> tuple[CommutingGroup, PauliSum]:
    diag = [t for t in h.terms if is_diagonal(t.string)]
    rest = [t for t in h.terms if not is_diagonal(t.string)]
    return CommutingGroup(PauliSum(h.n_qubits, diag), 1, True), PauliSum(h.n_qubits, rest)


def _insertion_key(t: PauliTerm):
    return (-abs(t.coefficient), t.string.sort_key())


def partition(h: PauliSum) -> Partition:
    """Z-group first, then sorted greedy insertion of the off-diagonal terms.

    Off-diagonal terms are visited by decreasing ``|c|`` (ties: lexicographic
    bit pattern) and dropped into the first group they fully commute with.
    Within a group, terms keep the order of the input Hamiltonian.
    """
    if len(h) == 0:
        raise ValueError("cannot partition an empty Hamiltonian")
    zgroup, rest = extract_z_group(h)
    buckets: list[list[PauliTerm]] = []
    for t in sorted(rest.terms, key=_insertion_key):
        for bucket in buckets:
            if all(commutes(t.string, u.string) for u in bucket):
                bucket.append(t)
                break
        else:
            buckets.append([t])

    position = {(t.string.x, t.string.z): i for i, t in enumerate(h.terms)}
    groups = []
    if len(zgroup):
        groups.append(zgroup)
    for bucket in buckets:
        bucket.sort(key=lambda t: position[(t.string.x, t.string.z)])
        groups.append(CommutingGroup(PauliSum(h.n_qubits, bucket), len(groups) + 1))
    return Partition(tuple(groups), h.digest())


def order_groups(p: Partition) -> Partition:
    """Keep the z-group first; sort the others by descending 1-norm (stable)."""
    head = [g for g in p.groups if g.is_z_only]
    tail = [g for g in p.groups if not g.is_z_only]
    tail = sorted(tail, key=lambda g: (-round(g.one_norm, 12), g.index))
    return Partition(tuple(head + tail), p.source_hash)

"""Seeded random problem instances used by the tests and the scripts."""

from __future__ import annotations

import numpy as np

from .clifford import CliffordCircuit, conjugate_by_circuit
from .gates import Gate
from .pauli import PauliString, PauliSum


def random_pauli(n: int, rng: np.random.Generator) -> PauliString:
    full = 1 << n
    return PauliString(n, int(rng.integers(full)), int(rng.integers(full)))


def random_hamiltonian(n: int, n_terms: int, rng: np.random.Generator, identity: bool = True) -> PauliSum:
    """Random real-weighted Pauli sum; includes the identity and a few diagonal terms."""
    terms = []
    if identity:
        terms.append((float(rng.normal()), PauliString(n)))
    while len(terms) < n_terms:
        p = random_pauli(n, rng)
        if len(terms) % 3 == 1:
            p = PauliString(n, 0, p.z)
        if p.x == 0 and p.z == 0:
            continue
        terms.append((float(rng.uniform(-1, 1)), p))
    return PauliSum.from_terms(n, terms)


def random_clifford(n: int, depth: int, rng: np.random.Generator) -> CliffordCircuit:
    gates = []
    for _ in range(depth):
        kind = rng.choice(["H", "S", "Sdg", "X", "CNOT", "CZ"] if n > 1 else ["H", "S", "Sdg", "X"])
        if kind in ("CNOT", "CZ"):
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(Gate(str(kind), int(b), int(a)))
        else:
            gates.append(Gate(str(kind), int(rng.integers(n))))
    return CliffordCircuit(n, tuple(gates))


def random_commuting_sum(n: int, n_terms: int, rng: np.random.Generator) -> PauliSum:
    """Commuting set built by conjugating random diagonal strings with a random Clifford."""
    hidden = random_clifford(n, 6 * n, rng).inverse()
    terms = []
    for _ in range(n_terms):
        z = int(rng.integers(1, 1 << n))
        p = conjugate_by_circuit(PauliString(n, 0, z), hidden)
        terms.append((float(rng.uniform(-1, 1)), p))
    return PauliSum.from_terms(n, terms)

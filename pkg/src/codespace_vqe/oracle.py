"""Exact reference energies from dense matrices.

Matrices are assembled from explicit 2x2 Pauli matrices and Kronecker
products, independently of the symplectic code paths they are used to check.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .pauli import PauliString, PauliSum

__all__ = ["MAX_QUBITS", "pauli_matrix", "to_matrix", "ground_energy", "hf_energy", "hf_state"]

MAX_QUBITS = 14

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _guard(n: int) -> None:
    if n > MAX_QUBITS:
        raise ValueError(f"dense matrices limited to {MAX_QUBITS} qubits, got {n}")


def pauli_matrix(p: PauliString) -> np.ndarray:
    _guard(p.n_qubits)
    mats = [_PAULI[p.letter(j)] for j in range(p.n_qubits)]
    return p.sign * reduce(np.kron, mats)


def to_matrix(h: PauliSum) -> np.ndarray:
    _guard(h.n_qubits)
    dim = 2**h.n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    for t in h.terms:
        m += t.coefficient * pauli_matrix(t.string)
    if not np.allclose(m, m.conj().T, atol=1e-10):
        raise ValueError("operator is not Hermitian")
    return m


def ground_energy(h: PauliSum) -> tuple[float, np.ndarray]:
    vals, vecs = np.linalg.eigh(to_matrix(h))
    return float(vals[0]), vecs[:, 0]


def hf_state(n_qubits: int, n_electrons: int) -> np.ndarray:
    if not 0 <= n_electrons <= n_qubits:
        raise ValueError("electron count out of range")
    bits = "1" * n_electrons + "0" * (n_qubits - n_electrons)
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def hf_energy(h: PauliSum, n_electrons: int) -> float:
    """``<HF|H|HF>`` from the diagonal terms alone."""
    if not 0 <= n_electrons <= h.n_qubits:
        raise ValueError("electron count out of range")
    total = 0.0
    for t in h.terms:
        s = t.string
        if s.x:
            continue
        occupied_z = sum(1 for j in range(n_electrons) if s.letter(j) == "Z")
        total += t.coefficient * (-1) ** occupied_z
    return total

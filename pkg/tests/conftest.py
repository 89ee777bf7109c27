from functools import reduce

import numpy as np
import pytest

from codespace_vqe import data_path, load_circuit, load_hamiltonian

I2 = np.eye(2)
MATS = {
    "H": np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "X": np.array([[0, 1], [1, 0]]),
}
PAULI = {"X": MATS["X"], "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1.0, -1.0])}


def embed(m, q, n):
    return reduce(np.kron, [m if j == q else I2 for j in range(n)])


def dense_gate(g, n):
    """Full 2^n unitary of one gate, built from explicit basis-state action (qubit 0 leftmost)."""
    if g.kind in MATS:
        return embed(MATS[g.kind], g.target, n)
    if g.kind in ("RX", "RY", "RZ"):
        raise ValueError("use dense_rotation")
    dim = 2**n
    u = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        bits = [(b >> (n - 1 - j)) & 1 for j in range(n)]
        if g.kind == "CNOT":
            out = list(bits)
            if bits[g.control]:
                out[g.target] ^= 1
            u[int("".join(map(str, out)), 2), b] = 1
        elif g.kind == "CZ":
            u[b, b] = -1 if bits[g.control] and bits[g.target] else 1
    return u


def dense_circuit(c):
    n = c.n_qubits
    u = np.eye(2**n, dtype=complex)
    for g in c.gates:
        u = dense_gate(g, n) @ u
    return u


def dense_pauli(p):
    mats = [PAULI.get(p.letter(j), I2) for j in range(p.n_qubits)]
    return p.sign * reduce(np.kron, mats)


def ket(label):
    psi = np.zeros(2 ** len(label), dtype=complex)
    psi[int(label, 2)] = 1
    return psi


@pytest.fixture(scope="session")
def h2():
    return load_hamiltonian(data_path("h2.ham"))


@pytest.fixture(scope="session")
def fig8():
    return load_circuit(data_path("h2_g2_diagonalizer.circ"), 4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

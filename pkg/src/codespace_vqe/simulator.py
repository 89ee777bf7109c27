"""Dense statevector simulation.

Index ``b`` of a state vector is the computational basis state whose ket
label, read left to right, lists qubits 0..n-1; qubit ``q`` is bit
``n - 1 - q`` of ``b``. ``|1100>`` on four qubits is index 12.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .gates import Gate
from .pauli import PauliString, PauliSum

__all__ = [
    "basis_state",
    "apply_gate",
    "apply_pauli",
    "apply_pauli_exp",
    "run",
    "expectation",
    "pauli_expectation",
    "fastpath_expectation",
    "product_state_bloch",
    "state_to_csv",
]

HERMITIAN_TOL = 1e-10

_SQ = 1 / np.sqrt(2)
_FIXED = {
    "H": np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
}


def rotation_matrix(kind: str, theta: float) -> np.ndarray:
    """``exp(-i theta sigma)`` for sigma in {X, Y, Z}."""
    c, s = np.cos(theta), np.sin(theta)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]])
    raise ValueError(kind)


def basis_state(n_qubits: int, index: int = 0) -> np.ndarray:
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[index] = 1.0
    return psi


def _apply_1q(psi: np.ndarray, m: np.ndarray, q: int, n: int) -> np.ndarray:
    view = psi.reshape(2**q, 2, 2 ** (n - q - 1))
    return np.einsum("ab,ibj->iaj", m, view).reshape(-1)


@lru_cache(maxsize=None)
def _indices(n: int) -> np.ndarray:
    return np.arange(2**n)


@lru_cache(maxsize=4096)
def _pauli_action(n: int, x: int, z: int, phase: int) -> tuple[np.ndarray, np.ndarray]:
    """Permutation and phases so that ``(P psi)[c] = factor[c] * psi[perm[c]]``."""
    idx = _indices(n)
    src = idx ^ x
    ny = bin(x & z).count("1")
    parity = np.zeros(len(idx), dtype=np.int64)
    masked = src & z
    while masked.any():
        parity ^= masked & 1
        masked = masked >> 1
    factor = (1j ** ((ny + phase) % 4)) * (1 - 2 * parity)
    return src, factor.astype(complex)


def apply_pauli(psi: np.ndarray, p: PauliString) -> np.ndarray:
    src, factor = _pauli_action(p.n_qubits, p.x, p.z, p.phase)
    return factor * psi[src]


def apply_pauli_exp(psi: np.ndarray, p: PauliString, theta: float) -> np.ndarray:
    """``exp(-i theta P) psi = cos(theta) psi - i sin(theta) P psi`` for Hermitian ``P``."""
    return np.cos(theta) * psi - 1j * np.sin(theta) * apply_pauli(psi, p)


def _apply_cnot(psi: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    c, t = 1 << (n - 1 - control), 1 << (n - 1 - target)
    idx = _indices(n)
    src = np.where(idx & c, idx ^ t, idx)
    return psi[src]


def _apply_cz(psi: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    ma, mb = 1 << (n - 1 - a), 1 << (n - 1 - b)
    idx = _indices(n)
    both = ((idx & ma) != 0) & ((idx & mb) != 0)
    return np.where(both, -psi, psi)


def apply_gate(psi: np.ndarray, g: Gate, n: int, theta: float | None = None) -> np.ndarray:
    if g.kind in _FIXED:
        return _apply_1q(psi, _FIXED[g.kind], g.target, n)
    if g.kind == "CNOT":
        return _apply_cnot(psi, g.control, g.target, n)
    if g.kind == "CZ":
        return _apply_cz(psi, g.control, g.target, n)
    if theta is None:
        raise ValueError(f"{g.kind} needs an angle")
    if g.kind == "PEXP":
        return apply_pauli_exp(psi, g.generator, theta)
    return _apply_1q(psi, rotation_matrix(g.kind, theta), g.target, n)


def run(circuit, params=None, initial: np.ndarray | None = None, shift: tuple[int, float] | None = None) -> np.ndarray:
    """Apply ``circuit`` gate by gate.

    ``shift=(gate_index, delta)`` adds ``delta`` to the angle of a single
    gate occurrence; the gradient code uses it for per-gate shift rules.
    """
    n = circuit.n_qubits
    params = np.zeros(0) if params is None else np.asarray(params, dtype=float)
    n_params = getattr(circuit, "n_params", 0)
    if len(params) != n_params:
        raise ValueError(f"expected {n_params} parameters, got {len(params)}")
    psi = basis_state(n) if initial is None else np.asarray(initial, dtype=complex)
    if psi.shape != (2**n,):
        raise ValueError("initial state has the wrong dimension")
    for k, g in enumerate(circuit.gates):
        theta = None
        if g.slot is not None:
            theta = params[g.slot]
            if shift is not None and shift[0] == k:
                theta = theta + shift[1]
        psi = apply_gate(psi, g, n, theta)
    return psi


def pauli_expectation(psi: np.ndarray, p: PauliString) -> complex:
    return complex(np.vdot(psi, apply_pauli(psi, p)))


def expectation(psi: np.ndarray, h: PauliSum) -> float:
    """``<psi|H|psi>``; terms are summed in Hamiltonian order."""
    if psi.shape != (2**h.n_qubits,):
        raise ValueError("state and Hamiltonian sizes differ")
    total = 0.0 + 0.0j
    for t in h.terms:
        if t.string.x == 0 and t.string.z == 0:
            total += t.coefficient * np.vdot(psi, psi)
        else:
            total += t.coefficient * pauli_expectation(psi, t.string)
    scale = max(1.0, sum(abs(t.coefficient) for t in h.terms))
    if abs(total.imag) > HERMITIAN_TOL * scale:
        raise ValueError(f"expectation has imaginary part {total.imag:.3e}")
    return float(total.real)


def product_state_bloch(rotation_params, hf_bits) -> np.ndarray:
    """Bloch vectors ``(<X>, <Y>, <Z>)`` of ``Rx Ry Rz |b_j>`` for each qubit.

    ``rotation_params`` is laid out (z, y, x) per qubit, qubit-major.
    """
    theta = np.asarray(rotation_params, dtype=float).reshape(-1, 3)
    out = np.empty((len(theta), 3))
    for j, (tz, ty, tx) in enumerate(theta):
        # Rz only adds a phase to a basis state; Ry then Rx rotate the Bloch vector by 2*angle.
        z0 = -1.0 if hf_bits[j] else 1.0
        v = np.array([0.0, 0.0, z0])
        a = 2 * ty
        v = np.array([v[0] * np.cos(a) + v[2] * np.sin(a), v[1], -v[0] * np.sin(a) + v[2] * np.cos(a)])
        b = 2 * tx
        v = np.array([v[0], v[1] * np.cos(b) - v[2] * np.sin(b), v[1] * np.sin(b) + v[2] * np.cos(b)])
        out[j] = v
    return out


def fastpath_expectation(u, rotation_params, n_electrons: int, h: PauliSum) -> float:
    """Energy of ``U† R |HF>`` without building a state vector.

    Each term is conjugated through the Clifford ``u`` (``U P U†``), which
    leaves a signed Pauli string whose expectation on the product state
    ``R |HF>`` is a product of single-qubit Bloch components.
    """
    from .clifford import conjugate_by_circuit, hf_mask

    n = h.n_qubits
    if len(rotation_params) != 3 * n:
        raise ValueError(f"expected {3 * n} rotation parameters")
    mask = hf_mask(n, n_electrons)
    hf_bits = [(mask >> (n - 1 - j)) & 1 for j in range(n)]
    bloch = product_state_bloch(rotation_params, hf_bits)
    total = 0.0
    for t in h.terms:
        q = conjugate_by_circuit(t.string, u)
        value = 1.0 if q.phase == 0 else -1.0
        for j in q.support:
            letter = q.letter(j)
            value *= bloch[j, "XYZ".index(letter)]
        total += t.coefficient * value
    return float(total)


def state_to_csv(psi: np.ndarray) -> str:
    lines = ["index,re,im"]
    lines += [f"{i},{a.real!r},{a.imag!r}" for i, a in enumerate(psi)]
    return "\n".join(lines) + "\n"

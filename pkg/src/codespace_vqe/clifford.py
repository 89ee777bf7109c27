"""Clifford diagonalizers for commuting groups and their signed stabilizer groups.

Conjugation convention: for a circuit whose gates act in list order,
``U = g_last ... g_first`` and :func:`conjugate_by_circuit` returns ``U P U†``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gates import CLIFFORD_KINDS, Gate, parse_gate
from .grouping import CommutingGroup
from .pauli import PauliString, commutes, is_diagonal

__all__ = [
    "CliffordCircuit",
    "SignedStabilizerGroup",
    "Tableau",
    "conjugate_gate",
    "conjugate_by_circuit",
    "diagonalize_group",
    "sign_assignment",
    "stabilizer_state",
    "hf_mask",
    "load_circuit",
]


@dataclass(frozen=True)
class CliffordCircuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if g.kind not in CLIFFORD_KINDS:
                raise ValueError(f"{g.kind} is not a Clifford gate")
            g.check_range(self.n_qubits)

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def inverse(self) -> "CliffordCircuit":
        return CliffordCircuit(self.n_qubits, tuple(g.inverse() for g in reversed(self.gates)))

    def to_text(self) -> str:
        return "".join(g.to_text() + "\n" for g in self.gates)

    @classmethod
    def from_text(cls, text: str, n_qubits: int) -> "CliffordCircuit":
        gates = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                gates.append(parse_gate(line, n_qubits))
        return cls(n_qubits, tuple(gates))


def load_circuit(path: str | Path, n_qubits: int) -> CliffordCircuit:
    return CliffordCircuit.from_text(Path(path).read_text(encoding="utf-8"), n_qubits)


def _bit(n: int, q: int) -> int:
    return 1 << (n - 1 - q)


def conjugate_gate(p: PauliString, g: Gate) -> PauliString:
    """``G P G†`` for one Clifford gate, tracking the sign exactly."""
    n = p.n_qubits
    x, z, phase = p.x, p.z, p.phase
    if g.kind == "CZ":
        for sub in (Gate("H", g.target), Gate("CNOT", g.target, g.control), Gate("H", g.target)):
            p = conjugate_gate(p, sub)
        return p
    t = _bit(n, g.target)
    xt, zt = bool(x & t), bool(z & t)
    if g.kind == "H":
        if xt and zt:
            phase += 2
        x, z = (x & ~t) | (t if zt else 0), (z & ~t) | (t if xt else 0)
    elif g.kind == "S":
        if xt and zt:
            phase += 2
        if xt:
            z ^= t
    elif g.kind == "Sdg":
        if xt and not zt:
            phase += 2
        if xt:
            z ^= t
    elif g.kind == "X":
        if zt:
            phase += 2
    elif g.kind == "CNOT":
        c = _bit(n, g.control)
        xc, zc = bool(x & c), bool(z & c)
        if xc and zt and (xt == zc):
            phase += 2
        if xc:
            x ^= t
        if zt:
            z ^= c
    else:
        raise ValueError(f"{g.kind} is not a Clifford gate")
    return PauliString(n, x, z, phase)


def conjugate_by_circuit(p: PauliString, c: CliffordCircuit) -> PauliString:
    if p.n_qubits != c.n_qubits:
        raise ValueError(f"size mismatch: {p.n_qubits} vs {c.n_qubits} qubits")
    for g in c.gates:
        p = conjugate_gate(p, g)
    return p


@dataclass
class Tableau:
    """Independent commuting generators as mutable (x, z) bit-mask rows; signs are not tracked."""

    n_qubits: int
    rows: list[list[int]]

    @classmethod
    def from_strings(cls, strings) -> "Tableau":
        strings = list(strings)
        n = strings[0].n_qubits
        basis: dict[int, int] = {}  # leading bit -> reduced vector
        rows = []
        for s in strings:
            v = (s.x << n) | s.z
            w = v
            while w:
                lead = w.bit_length() - 1
                if lead not in basis:
                    basis[lead] = w
                    rows.append([s.x, s.z])
                    break
                w ^= basis[lead]
        for i, (a, b) in enumerate(rows):
            for a2, b2 in rows[i + 1 :]:
                if bin((a & b2) ^ (b & a2)).count("1") % 2:
                    raise ValueError("generators do not commute")
        return cls(n, rows)

    def __len__(self):
        return len(self.rows)

    def apply(self, g: Gate) -> None:
        for row in self.rows:
            p = conjugate_gate(PauliString(self.n_qubits, row[0], row[1]), g)
            row[0], row[1] = p.x, p.z

    def eliminate(self, block: int, columns, rows) -> list[tuple[int, int]]:
        """Reduce ``rows`` to echelon form on one block (0: x, 1: z); return (row, column) pivots."""
        rows = list(rows)
        pivots = []
        for col in columns:
            b = _bit(self.n_qubits, col)
            free = [i for i in rows if i not in {r for r, _ in pivots}]
            hit = next((i for i in free if self.rows[i][block] & b), None)
            if hit is None:
                continue
            for i in rows:
                if i != hit and self.rows[i][block] & b:
                    self.rows[i][0] ^= self.rows[hit][0]
                    self.rows[i][1] ^= self.rows[hit][1]
            pivots.append((hit, col))
        return pivots


def diagonalize_group(g: CommutingGroup) -> CliffordCircuit:
    """Clifford ``U`` with ``U P U†`` diagonal for every term ``P`` of ``g``.

    Symplectic elimination on an independent generating set: H on extra
    columns until the X-block has full rank, CNOTs to reduce it to the
    identity on pivot columns, S and CZ to clear the Z-block on those
    pivots, then H on the pivots.
    """
    n = g.n_qubits
    strings = [s for s in g.terms.strings if s.x or s.z]
    if not strings or all(is_diagonal(s) for s in strings):
        return CliffordCircuit(n)
    tab = Tableau.from_strings(strings)
    gates: list[Gate] = []

    def emit(gate: Gate) -> None:
        gates.append(gate)
        tab.apply(gate)

    x_pivots = tab.eliminate(0, range(n), range(len(tab)))
    pivot_rows = {r for r, _ in x_pivots}
    z_rows = [i for i in range(len(tab)) if i not in pivot_rows]
    pivot_cols = {c for _, c in x_pivots}
    free = [c for c in range(n) if c not in pivot_cols]
    for _, col in tab.eliminate(1, free, z_rows):
        emit(Gate("H", col))

    pivots = tab.eliminate(0, range(n), range(len(tab)))
    if len(pivots) != len(tab):
        raise RuntimeError("X-block rank deficient after basis change")
    for r, col in pivots:
        for c in range(n):
            if c != col and tab.rows[r][0] & _bit(n, c):
                emit(Gate("CNOT", c, col))
    for r, col in pivots:
        if tab.rows[r][1] & _bit(n, col):
            emit(Gate("S", col))
    for i, (r, col) in enumerate(pivots):
        for r2, col2 in pivots[i + 1 :]:
            if tab.rows[r][1] & _bit(n, col2):
                emit(Gate("CZ", col2, col))
    for _, col in pivots:
        emit(Gate("H", col))

    circuit = CliffordCircuit(n, tuple(gates))
    for s in g.terms.strings:
        image = conjugate_by_circuit(s, circuit)
        if not is_diagonal(image) or image.phase % 2:
            raise RuntimeError(f"synthesis left {s.to_text()} off-diagonal")
    return circuit


def hf_mask(n_qubits: int, n_electrons: int) -> int:
    """Bit mask of the Hartree-Fock occupation: qubits 0..n_e-1 set."""
    if not 0 < n_electrons <= n_qubits:
        raise ValueError(f"need 0 < n_electrons <= {n_qubits}, got {n_electrons}")
    return sum(_bit(n_qubits, q) for q in range(n_electrons))


def hf_eigenvalue(d: PauliString, n_electrons: int) -> int:
    """``<HF| D |HF>`` for a real diagonal string ``D`` (always +1 or -1)."""
    parity = bin(d.z & hf_mask(d.n_qubits, n_electrons)).count("1") % 2
    return (-1 if d.phase == 2 else 1) * (-1) ** parity


@dataclass(frozen=True)
class SignedStabilizerGroup:
    index: int
    elements: tuple[PauliString, ...]
    n_electrons: int
    images: tuple[PauliString, ...] = ()

    def __post_init__(self):
        for i, a in enumerate(self.elements):
            if a.phase not in (0, 2):
                raise ValueError("stabilizer elements carry sign +1 or -1")
            for b in self.elements[i + 1 :]:
                if not commutes(a, b):
                    raise ValueError("stabilizer elements must commute")

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "n_electrons": self.n_electrons,
            "elements": [str(e) for e in self.elements],
            "diagonal_images": [str(d) for d in self.images],
        }


def sign_assignment(g: CommutingGroup, u: CliffordCircuit, n_electrons: int) -> SignedStabilizerGroup:
    """Sign each term so that its image under ``u`` has eigenvalue +1 on ``|HF>``."""
    hf_mask(g.n_qubits, n_electrons)
    elements, images = [], []
    for s in g.terms.strings:
        d = conjugate_by_circuit(s, u)
        if not is_diagonal(d) or d.phase % 2:
            raise ValueError(f"circuit does not diagonalize {s.to_text()}")
        sigma = hf_eigenvalue(d, n_electrons)
        elements.append(s if sigma == 1 else s.negate())
        images.append(d if sigma == 1 else d.negate())
    return SignedStabilizerGroup(g.index, tuple(elements), n_electrons, tuple(images))


def stabilizer_state(u: CliffordCircuit, n_electrons: int) -> np.ndarray:
    """``U† |HF>`` as a dense amplitude vector."""
    from .simulator import apply_gate, basis_state

    psi = basis_state(u.n_qubits, hf_mask(u.n_qubits, n_electrons))
    for gate in u.inverse().gates:
        psi = apply_gate(psi, gate, u.n_qubits)
    return psi

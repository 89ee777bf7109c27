"""Parameterized circuits and the ansatz builders.

Gate lists are in acting order: the first gate touches the input state
first. A written operator product ``A B C |psi>`` is therefore stored as
``[C, B, A]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .clifford import CliffordCircuit, conjugate_by_circuit
from .gates import TWO_QUBIT_KINDS, Gate, parse_gate
from .grouping import Partition
from .pauli import PauliString, PauliSum

__all__ = [
    "ParamCircuit",
    "GateCounts",
    "hf_circuit",
    "rotation_layer",
    "single_code",
    "combined_codes",
    "vha",
    "compile_circuit",
    "compile_and_count",
]


@dataclass(frozen=True)
class ParamCircuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()
    n_params: int = 0
    kind: str = "custom"
    layers: int = 1
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        used = set()
        for g in self.gates:
            g.check_range(self.n_qubits)
            if g.slot is not None:
                if not 0 <= g.slot < self.n_params:
                    raise ValueError(f"slot {g.slot} outside [0, {self.n_params})")
                used.add(g.slot)
        if len(used) != self.n_params:
            raise ValueError("every parameter slot must be referenced at least once")

    def __len__(self):
        return len(self.gates)

    def slot_gates(self) -> dict[int, list[int]]:
        """Map slot -> indices of the gates that read it."""
        out: dict[int, list[int]] = {}
        for k, g in enumerate(self.gates):
            if g.slot is not None:
                out.setdefault(g.slot, []).append(k)
        return out

    def to_text(self) -> str:
        head = f"# kind={self.kind} layers={self.layers} qubits={self.n_qubits} params={self.n_params}\n"
        return head + "".join(g.to_text() + "\n" for g in self.gates)

    @classmethod
    def from_text(cls, text: str, n_qubits: int) -> "ParamCircuit":
        gates = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                gates.append(parse_gate(line, n_qubits))
        slots = {g.slot for g in gates if g.slot is not None}
        return cls(n_qubits, tuple(gates), len(slots))


def hf_circuit(n: int, n_electrons: int) -> ParamCircuit:
    if not 0 < n_electrons <= n:
        raise ValueError(f"need 0 < n_electrons <= {n}, got {n_electrons}")
    return ParamCircuit(n, tuple(Gate("X", q) for q in range(n_electrons)), 0, "hf")


def _rotation_gates(n: int, slot_base: int) -> list[Gate]:
    gates = []
    for j in range(n):
        s = slot_base + 3 * j
        gates += [Gate("RZ", j, slot=s), Gate("RY", j, slot=s + 1), Gate("RX", j, slot=s + 2)]
    return gates


def rotation_layer(n: int, slot_base: int = 0) -> ParamCircuit:
    """Per qubit ``Rx Ry Rz`` with RZ acting first; slots run (z, y, x) per qubit, qubit-major.

    The returned circuit numbers its own slots from 0; ``slot_base`` is kept
    in ``meta`` and is where the builders place the block in a larger circuit.
    """
    return ParamCircuit(n, tuple(_rotation_gates(n, 0)), 3 * n, "rotation", meta={"slot_base": slot_base})


def single_code(u: CliffordCircuit, n_electrons: int) -> ParamCircuit:
    """``U† R(theta) |HF>`` with 3n parameters."""
    n = u.n_qubits
    gates = hf_circuit(n, n_electrons).gates + tuple(_rotation_gates(n, 0)) + u.inverse().gates
    meta = {"clifford": u, "n_electrons": n_electrons}
    return ParamCircuit(n, gates, 3 * n, "single_code", 1, meta)


def combined_codes(p: Partition, diagonalizers, n_electrons: int, layers: int = 1) -> ParamCircuit:
    """``prod_i U_i† R_i U_i |HF>`` with the first group of ``p`` acting first.

    Every block of every layer gets fresh slots, numbered layer-major so a
    circuit with more layers extends the slot vector of one with fewer.
    """
    if layers < 1:
        raise ValueError("layers must be >= 1")
    diagonalizers = list(diagonalizers)
    if len(diagonalizers) != len(p):
        raise ValueError(f"{len(diagonalizers)} diagonalizers for {len(p)} groups")
    n = p.n_qubits
    for u in diagonalizers:
        if u.n_qubits != n:
            raise ValueError("diagonalizer size mismatch")
    gates = list(hf_circuit(n, n_electrons).gates)
    slot = 0
    for _ in range(layers):
        for u in diagonalizers:
            gates += u.gates
            gates += _rotation_gates(n, slot)
            gates += u.inverse().gates
            slot += 3 * n
    meta = {
        "n_electrons": n_electrons,
        "n_groups": len(p),
        "param_convention": "3nm",
        "note": "raw count 3*n*m*layers; published CCA parameter counts use an unstated convention",
    }
    return ParamCircuit(n, tuple(gates), slot, "combined_codes", layers, meta)


def vha(
    h: PauliSum,
    n_electrons: int,
    grouped: bool = False,
    diagonalizers=None,
    partition: Partition | None = None,
    layers: int = 1,
) -> ParamCircuit:
    """Trotterized Hamiltonian ansatz, one slot per non-identity term per layer.

    Ungrouped: ``exp(-i theta_k P_k)`` in Hamiltonian order. Grouped: for each
    group, ``U_k``, the exponentials of its diagonalized terms, then ``U_k†``.
    """
    n = h.n_qubits
    gates = list(hf_circuit(n, n_electrons).gates)
    slot = 0
    if grouped:
        if diagonalizers is None or partition is None:
            raise ValueError("grouped VHA needs a partition and its diagonalizers")
        diagonalizers = list(diagonalizers)
        if len(diagonalizers) != len(partition):
            raise ValueError("diagonalizers misaligned with groups")
        blocks = [(u, [conjugate_by_circuit(s, u) for s in g.terms.strings]) for g, u in zip(partition, diagonalizers)]
    else:
        blocks = [(None, h.strings)]
    for _ in range(layers):
        for u, strings in blocks:
            if u is not None:
                gates += u.gates
            for s in strings:
                if s.x == 0 and s.z == 0:
                    continue
                gates.append(Gate("PEXP", slot=slot, generator=s))
                slot += 1
            if u is not None:
                gates += u.inverse().gates
    if slot == 0:
        raise ValueError("Hamiltonian has only an identity term")
    kind = "vha_grouped" if grouped else "vha"
    return ParamCircuit(n, tuple(gates), slot, kind, layers, {"n_electrons": n_electrons})


@dataclass(frozen=True)
class GateCounts:
    two_qubit: int
    single_qubit: int
    parameters: int

    def __post_init__(self):
        if min(self.two_qubit, self.single_qubit, self.parameters) < 0:
            raise ValueError("gate counts are nonnegative")


_TO_Z = {"X": (("H",), ("H",)), "Y": (("Sdg", "H"), ("H", "S")), "Z": ((), ())}


def _expand_pexp(g: Gate) -> list[Gate]:
    """Basis change, CNOT ladder onto the last support qubit, RZ, then undo.

    A weight-w exponential costs 2(w - 1) CNOTs; a negative generator is
    handled by flipping the RZ angle with X on both sides.
    """
    p: PauliString = g.generator
    support = p.support
    if not support:
        return []  # global phase
    before, after = [], []
    for q in support:
        pre, post = _TO_Z[p.letter(q)]
        before += [Gate(k, q) for k in pre]
        after += [Gate(k, q) for k in post]
    ladder = [Gate("CNOT", b, a) for a, b in zip(support, support[1:])]
    last = support[-1]
    core = [Gate("RZ", last, slot=g.slot)]
    if p.phase == 2:
        core = [Gate("X", last)] + core + [Gate("X", last)]
    return before + ladder + core + ladder[::-1] + after


def compile_circuit(c: ParamCircuit) -> ParamCircuit:
    gates = []
    for g in c.gates:
        gates += _expand_pexp(g) if g.kind == "PEXP" else [g]
    return replace(c, gates=tuple(gates))


def compile_and_count(c: ParamCircuit) -> GateCounts:
    compiled = compile_circuit(c)
    two = sum(1 for g in compiled.gates if g.kind in TWO_QUBIT_KINDS)
    single = len(compiled.gates) - two
    return GateCounts(two, single, c.n_params)

"""Gate record shared by Clifford and parameterized circuits, plus the text format."""

from __future__ import annotations

from dataclasses import dataclass

from .pauli import PauliString, parse_pauli

CLIFFORD_KINDS = frozenset({"H", "S", "Sdg", "X", "CNOT", "CZ"})
ROTATION_KINDS = frozenset({"RX", "RY", "RZ"})
PARAM_KINDS = ROTATION_KINDS | {"PEXP"}
TWO_QUBIT_KINDS = frozenset({"CNOT", "CZ"})

_INVERSE_KIND = {"S": "Sdg", "Sdg": "S"}


@dataclass(frozen=True)
class Gate:
    """One gate. ``control`` is set for CNOT/CZ, ``slot`` for parameterized gates.

    Rotations follow ``exp(-i * theta * G)`` with no factor 1/2, ``G`` being the
    single-qubit Pauli (RX/RY/RZ) or the Pauli-string ``generator`` (PEXP).
    A parameterized gate may carry a fixed ``angle``; it is then not variational.
    """

    kind: str
    target: int = 0
    control: int | None = None
    slot: int | None = None
    generator: PauliString | None = None

    def __post_init__(self):
        if self.kind not in CLIFFORD_KINDS | PARAM_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind in TWO_QUBIT_KINDS:
            if self.control is None or self.control == self.target:
                raise ValueError(f"{self.kind} needs a control distinct from the target")
        elif self.control is not None:
            raise ValueError(f"{self.kind} takes no control qubit")
        if self.kind in PARAM_KINDS and self.slot is None:
            raise ValueError(f"{self.kind} needs a parameter slot")
        if self.kind == "PEXP":
            if self.generator is None:
                raise ValueError("PEXP needs a generator")
            if self.generator.phase not in (0, 2):
                raise ValueError("PEXP generator must be Hermitian")

    @property
    def qubits(self) -> tuple[int, ...]:
        if self.kind == "PEXP":
            return tuple(self.generator.support)
        if self.control is not None:
            return (self.control, self.target)
        return (self.target,)

    @property
    def is_clifford(self) -> bool:
        return self.kind in CLIFFORD_KINDS

    def inverse(self) -> "Gate":
        if not self.is_clifford:
            raise ValueError("only Clifford gates invert to a gate of the same form")
        return Gate(_INVERSE_KIND.get(self.kind, self.kind), self.target, self.control)

    def check_range(self, n_qubits: int) -> None:
        if self.kind == "PEXP":
            if self.generator.n_qubits != n_qubits:
                raise ValueError("PEXP generator size mismatch")
            return
        for q in self.qubits:
            if not 0 <= q < n_qubits:
                raise ValueError(f"qubit {q} out of range for {n_qubits} qubits")

    def to_text(self) -> str:
        if self.kind == "PEXP":
            sign = "-" if self.generator.phase == 2 else ""
            return f"PEXP {sign}{self.generator.to_text()} slot={self.slot}"
        if self.kind in ROTATION_KINDS:
            return f"{self.kind} {self.target} slot={self.slot}"
        if self.control is not None:
            return f"{self.kind} {self.control} {self.target}"
        return f"{self.kind} {self.target}"


def parse_gate(line: str, n_qubits: int) -> Gate:
    tokens = line.split()
    kind, args = tokens[0], tokens[1:]
    slot = None
    if args and args[-1].startswith("slot="):
        slot = int(args.pop()[5:])
    if kind == "PEXP":
        text = " ".join(args)
        negative = text.startswith("-")
        gen = parse_pauli(text.lstrip("-").strip(), n_qubits)
        return Gate("PEXP", slot=slot, generator=gen.negate() if negative else gen)
    if kind in TWO_QUBIT_KINDS:
        if len(args) != 2:
            raise ValueError(f"{kind} expects control and target: {line!r}")
        return Gate(kind, int(args[1]), int(args[0]))
    if len(args) != 1:
        raise ValueError(f"{kind} expects one qubit: {line!r}")
    return Gate(kind, int(args[0]), slot=slot)

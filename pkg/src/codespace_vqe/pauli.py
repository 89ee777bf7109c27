"""Symplectic Pauli strings, Pauli sums and the Hamiltonian text format.

A Pauli string on ``n`` qubits is stored as two integer bit masks ``x`` and
``z`` plus a phase exponent ``k`` so that the operator is ``i**k`` times the
tensor product of the single-qubit factors. Qubit ``j`` lives at bit
``n - 1 - j`` of each mask, which makes the masks line up with statevector
indices when qubit 0 is the leftmost ket label (``|1100>``).

Per qubit, ``(x, z)`` = (0, 0) is I, (1, 0) is X, (0, 1) is Z and (1, 1) is Y.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

__all__ = [
    "PauliString",
    "PauliTerm",
    "PauliSum",
    "Hamiltonian",
    "parse_pauli",
    "multiply",
    "commutes",
    "is_diagonal",
    "one_norm",
    "parse_hamiltonian",
    "load_hamiltonian",
    "dump_hamiltonian",
]

DEDUP_TOL = 1e-12

_FACTOR = re.compile(r"^([XYZ])(\d+)$")
_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


def _bit(n_qubits: int, j: int) -> int:
    return 1 << (n_qubits - 1 - j)


@dataclass(frozen=True)
class PauliString:
    """``i**phase * (sigma_0 ⊗ ... ⊗ sigma_{n-1})`` in symplectic form."""

    n_qubits: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        full = (1 << self.n_qubits) - 1
        if self.x & ~full or self.z & ~full:
            raise ValueError("bit mask wider than n_qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def from_bits(cls, x_bits: Iterable[int], z_bits: Iterable[int], phase: int = 0) -> "PauliString":
        xb, zb = list(x_bits), list(z_bits)
        if len(xb) != len(zb):
            raise ValueError("x_bits and z_bits differ in length")
        n = len(xb)
        x = sum(_bit(n, j) for j, b in enumerate(xb) if b)
        z = sum(_bit(n, j) for j, b in enumerate(zb) if b)
        return cls(n, x, z, phase)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits)

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> (self.n_qubits - 1 - j)) & 1 for j in range(self.n_qubits))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> (self.n_qubits - 1 - j)) & 1 for j in range(self.n_qubits))

    @property
    def sign(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase]

    @property
    def weight(self) -> int:
        return bin(self.x | self.z).count("1")

    @property
    def support(self) -> list[int]:
        return [j for j in range(self.n_qubits) if (self.x | self.z) & _bit(self.n_qubits, j)]

    def letter(self, j: int) -> str:
        b = _bit(self.n_qubits, j)
        return _LETTERS[(int(bool(self.x & b)), int(bool(self.z & b)))]

    def unsigned(self) -> "PauliString":
        return PauliString(self.n_qubits, self.x, self.z, 0)

    def negate(self) -> "PauliString":
        return PauliString(self.n_qubits, self.x, self.z, self.phase + 2)

    def to_text(self) -> str:
        """Factor list such as ``"Y0 X1 X2 Y3"``; phase is not included."""
        factors = [f"{self.letter(j)}{j}" for j in self.support]
        return " ".join(factors) if factors else "I"

    def label(self) -> str:
        """Dense label such as ``"YXXY"`` with qubit 0 first."""
        return "".join(self.letter(j) for j in range(self.n_qubits))

    def sort_key(self) -> tuple:
        return self.x_bits + self.z_bits

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __str__(self):
        prefix = ("", "i*", "-", "-i*")[self.phase]
        return prefix + self.to_text()


def parse_pauli(text: str, n_qubits: int) -> PauliString:
    """Parse ``"X0 Z3"``-style text (or ``"I"``) into a phase-free string."""
    tokens = text.split()
    if tokens == ["I"]:
        return PauliString.identity(n_qubits)
    if not tokens:
        raise ValueError("empty Pauli text")
    x = z = 0
    seen: set[int] = set()
    for tok in tokens:
        m = _FACTOR.match(tok)
        if m is None:
            raise ValueError(f"bad Pauli factor {tok!r}")
        letter, idx = m.group(1), int(m.group(2))
        if idx >= n_qubits:
            raise ValueError(f"qubit index {idx} out of range for {n_qubits} qubits")
        if idx in seen:
            raise ValueError(f"duplicate qubit index {idx}")
        seen.add(idx)
        b = _bit(n_qubits, idx)
        if letter in "XY":
            x |= b
        if letter in "YZ":
            z |= b
    return PauliString(n_qubits, x, z, 0)


def _check_size(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits")


def _popcount(v: int) -> int:
    return bin(v).count("1")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Matrix product ``a @ b`` with the accumulated phase."""
    _check_size(a, b)
    # exponent of i picked up per qubit, summed over qubits (Aaronson-Gottesman g function)
    k = 0
    for j in range(a.n_qubits):
        bit = _bit(a.n_qubits, j)
        x1, z1 = bool(a.x & bit), bool(a.z & bit)
        x2, z2 = bool(b.x & bit), bool(b.z & bit)
        if x1 and z1:
            k += int(z2) - int(x2)
        elif x1:
            k += int(z2) * (2 * int(x2) - 1)
        elif z1:
            k += int(x2) * (1 - 2 * int(z2))
    return PauliString(a.n_qubits, a.x ^ b.x, a.z ^ b.z, a.phase + b.phase + k)


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_size(a, b)
    return _popcount((a.x & b.z) ^ (a.z & b.x)) % 2 == 0


def is_diagonal(a: PauliString) -> bool:
    return a.x == 0


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    string: PauliString

    def __post_init__(self):
        if not math.isfinite(self.coefficient):
            raise ValueError("coefficient must be finite")
        if self.string.phase != 0:
            raise ValueError("term strings carry phase +1; fold signs into the coefficient")

    def to_line(self) -> str:
        return f"{self.coefficient!r} {self.string.to_text()}"


@dataclass(frozen=True)
class PauliSum:
    """Ordered, deduplicated list of real-weighted Pauli terms."""

    n_qubits: int
    terms: tuple[PauliTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        keys = set()
        for t in self.terms:
            if t.string.n_qubits != self.n_qubits:
                raise ValueError("term size does not match n_qubits")
            key = (t.string.x, t.string.z)
            if key in keys:
                raise ValueError(f"duplicate term {t.string.to_text()}; use PauliSum.from_terms")
            keys.add(key)

    @classmethod
    def from_terms(cls, n_qubits: int, terms: Iterable[tuple[float, PauliString] | PauliTerm]) -> "PauliSum":
        """Merge duplicates (first occurrence fixes order) and drop near-zero terms."""
        acc: dict[tuple[int, int], list] = {}
        for t in terms:
            coeff, s = (t.coefficient, t.string) if isinstance(t, PauliTerm) else t
            coeff = float(coeff)
            if s.phase == 2:
                coeff, s = -coeff, s.unsigned()
            elif s.phase != 0:
                raise ValueError("imaginary phase makes the term non-Hermitian")
            key = (s.x, s.z)
            if key in acc:
                acc[key][0] += coeff
            else:
                acc[key] = [coeff, s]
        kept = [PauliTerm(c, s) for c, s in acc.values() if abs(c) >= DEDUP_TOL]
        return cls(n_qubits, tuple(kept))

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[PauliTerm]:
        return iter(self.terms)

    @property
    def coefficients(self) -> list[float]:
        return [t.coefficient for t in self.terms]

    @property
    def strings(self) -> list[PauliString]:
        return [t.string for t in self.terms]

    def to_lines(self) -> list[str]:
        return [t.to_line() for t in self.terms]

    def digest(self) -> str:
        payload = f"qubits: {self.n_qubits}\n" + "\n".join(self.to_lines())
        return hashlib.sha256(payload.encode()).hexdigest()


def one_norm(h: PauliSum) -> float:
    return float(sum(abs(t.coefficient) for t in h.terms))


@dataclass(frozen=True)
class Hamiltonian:
    """A parsed Hamiltonian file: the Pauli sum plus optional header metadata."""

    operator: PauliSum
    electrons: int | None = None
    name: str | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n_qubits(self) -> int:
        return self.operator.n_qubits


def _parse_coefficient(tok: str, lineno: int) -> float:
    if "j" in tok.lower():
        raise ValueError(f"line {lineno}: complex coefficient {tok!r} not supported")
    try:
        return float(tok)
    except ValueError:
        raise ValueError(f"line {lineno}: bad coefficient {tok!r}") from None


def parse_hamiltonian(text: str, name: str | None = None) -> Hamiltonian:
    """Parse the ``qubits: <n>`` / ``<coefficient> <pauli-text>`` format.

    Extra ``key: value`` header lines are allowed before the first term;
    ``electrons`` is read as an integer and the rest are kept as strings.
    """
    n_qubits = None
    meta: dict[str, str] = {}
    pending: list[tuple[float, PauliString]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition(":")
        if sep and re.fullmatch(r"[A-Za-z_]+", head.strip()):
            key, value = head.strip().lower(), rest.strip()
            if key == "qubits":
                n_qubits = int(value)
                if n_qubits < 1:
                    raise ValueError(f"line {lineno}: qubit count must be positive")
            else:
                meta[key] = value
            continue
        if n_qubits is None:
            raise ValueError(f"line {lineno}: term before 'qubits:' header")
        coeff_tok, _, pauli_text = line.partition(" ")
        coeff = _parse_coefficient(coeff_tok, lineno)
        try:
            s = parse_pauli(pauli_text.strip(), n_qubits)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        pending.append((coeff, s))
    if n_qubits is None:
        raise ValueError("missing 'qubits: <n>' header")
    if not pending:
        raise ValueError("Hamiltonian has no terms")
    electrons = int(meta.pop("electrons")) if "electrons" in meta else None
    return Hamiltonian(PauliSum.from_terms(n_qubits, pending), electrons, name or meta.get("name"), meta)


def load_hamiltonian(path: str | Path) -> Hamiltonian:
    path = Path(path)
    return parse_hamiltonian(path.read_text(encoding="utf-8"), name=path.stem)


def dump_hamiltonian(h: PauliSum, electrons: int | None = None, **meta) -> str:
    lines = [f"qubits: {h.n_qubits}"]
    if electrons is not None:
        lines.append(f"electrons: {electrons}")
    lines += [f"{k}: {v}" for k, v in meta.items()]
    lines += h.to_lines()
    return "\n".join(lines) + "\n"

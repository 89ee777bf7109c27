"""Commuting-group variational Hamiltonian ansatz: grouping, Clifford diagonalizers, ansatz circuits and VQE."""

from importlib.resources import files

from .circuit import GateCounts, ParamCircuit, combined_codes, compile_and_count, hf_circuit, rotation_layer, single_code, vha
from .clifford import (
    CliffordCircuit,
    SignedStabilizerGroup,
    conjugate_by_circuit,
    diagonalize_group,
    load_circuit,
    sign_assignment,
    stabilizer_state,
)
from .grouping import CommutingGroup, Partition, extract_z_group, order_groups, partition
from .oracle import ground_energy, hf_energy, to_matrix
from .pauli import Hamiltonian, PauliString, PauliSum, PauliTerm, commutes, is_diagonal, load_hamiltonian, multiply, one_norm, parse_hamiltonian, parse_pauli
from .simulator import expectation, fastpath_expectation, run
from .vqe import VqeConfig, VqeResult, gradient, minimize, objective, run_experiment

__version__ = "0.1.0"


def data_path(name: str):
    """Path of a bundled fixture, e.g. ``data_path("h2.ham")``."""
    return files(__name__).joinpath("data", name)

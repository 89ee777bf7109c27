"""Acceptance criteria, one check per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line (shown even without
``-s``) before asserting. ``python tests/test_acceptance.py`` prints the
same lines without pytest.
"""

import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import dense_circuit, dense_pauli, ket  # noqa: E402

from codespace_vqe import (  # noqa: E402
    CommutingGroup,
    PauliSum,
    VqeConfig,
    combined_codes,
    conjugate_by_circuit,
    data_path,
    diagonalize_group,
    expectation,
    fastpath_expectation,
    gradient,
    ground_energy,
    hf_energy,
    is_diagonal,
    load_circuit,
    load_hamiltonian,
    objective,
    order_groups,
    partition,
    run,
    run_experiment,
    sign_assignment,
    single_code,
    stabilizer_state,
    vha,
)
from codespace_vqe.instances import random_commuting_sum, random_hamiltonian  # noqa: E402
from codespace_vqe.pauli import Hamiltonian  # noqa: E402
from codespace_vqe.simulator import pauli_expectation  # noqa: E402

SEED = 7
G1 = {"I", "Z0", "Z1", "Z2", "Z3", "Z0 Z1", "Z0 Z2", "Z0 Z3", "Z1 Z2", "Z1 Z3", "Z2 Z3"}
G2 = {"Y0 X1 X2 Y3", "Y0 Y1 X2 X3", "X0 X1 Y2 Y3", "X0 Y1 Y2 X3"}


def h2():
    return load_hamiltonian(data_path("h2.ham"))


def _line(number, name, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2} {name}: {detail}"


@pytest.fixture
def report(capsys):
    def emit(number, name, ok, detail):
        with capsys.disabled():
            print("\n" + _line(number, name, ok, detail))
        assert ok, detail

    return emit


# -- shared checks, reused by the large-instance criterion --------------------


def diagonalization_failures(h: PauliSum, dense_up_to: int = 4) -> int:
    g = CommutingGroup(h, 0)
    u = diagonalize_group(g)
    n = h.n_qubits
    bad = 0
    um = dense_circuit(u) if n <= dense_up_to else None
    for s in h.strings:
        d = conjugate_by_circuit(s, u)
        if not is_diagonal(d) or d.phase not in (0, 2):
            bad += 1
        elif um is not None and not np.allclose(um @ dense_pauli(s) @ um.conj().T, dense_pauli(d), atol=1e-12):
            bad += 1
    return bad


def stabilization_error(h: PauliSum, n_e: int) -> float:
    worst = 0.0
    for g in order_groups(partition(h)):
        u = diagonalize_group(g)
        psi = stabilizer_state(u, n_e)
        for e in sign_assignment(g, u, n_e).elements:
            worst = max(worst, abs(pauli_expectation(psi, e) - 1))
    return worst


def fastpath_gap(h: PauliSum, n_e: int, rng, samples: int) -> float:
    parts = order_groups(partition(h))
    worst = 0.0
    for k in range(samples):
        g = parts[k % len(parts)]
        c = single_code(diagonalize_group(g), n_e)
        theta = rng.uniform(-np.pi, np.pi, c.n_params)
        fast = fastpath_expectation(c.meta["clifford"], theta, n_e, h)
        dense = expectation(run(c, theta), h)
        worst = max(worst, abs(fast - dense))
    return worst


def gradient_gap(c, h: PauliSum, rng, step: float = 1e-5) -> float:
    theta = rng.uniform(-np.pi, np.pi, c.n_params)
    g = gradient(c, h, theta)
    fd = np.empty_like(g)
    for k in range(c.n_params):
        e = np.zeros_like(theta)
        e[k] = step
        fd[k] = (objective(c, h, theta + e) - objective(c, h, theta - e)) / (2 * step)
    return float(np.max(np.abs(g - fd)))


def random_circuit(kind, h, n_e):
    parts = order_groups(partition(h))
    diags = [diagonalize_group(g) for g in parts]
    if kind == "single_code":
        return single_code(diags[0], n_e)
    if kind == "combined_codes":
        return combined_codes(parts, diags, n_e)
    if kind == "vha":
        return vha(h, n_e)
    return vha(h, n_e, True, diags, parts)


def layer_gap(h: PauliSum, n_e: int, max_iterations: int = 100) -> tuple[float, float]:
    ham = Hamiltonian(h, n_e)
    rep = run_experiment(ham, VqeConfig(layers=2, max_iterations=max_iterations), exact=False)
    e1, e2 = (r["energy"] for r in rep["per_layer"])
    return e1, e2


# -- criteria ------------------------------------------------------------------


def test_c01_h2_partition(report):
    t0 = time.perf_counter()
    parts = partition(h2().operator)
    elapsed = time.perf_counter() - t0
    found = sorted((frozenset(s.to_text() for s in g.terms.strings) for g in parts), key=len, reverse=True)
    ok = found == [frozenset(G1), frozenset(G2)] and elapsed < 1.0
    report(1, "H2 partition fidelity", ok, f"{len(parts)} groups of sizes {[len(f) for f in found]} in {elapsed:.3f}s")


def test_c02_diagonalization(report):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    g2 = next(g for g in partition(h2().operator) if not g.is_z_only)
    bad = diagonalization_failures(g2.terms)
    for k in range(100):
        n = 1 + k % 5
        bad += diagonalization_failures(random_commuting_sum(n, int(rng.integers(1, 2 * n + 2)), rng))
    elapsed = time.perf_counter() - t0
    report(2, "diagonalization contract", bad == 0 and elapsed < 10, f"{bad} failures over G2 + 100 random sets in {elapsed:.2f}s")


def test_c03_stabilization(report):
    rng = np.random.default_rng(SEED)
    worst = stabilization_error(h2().operator, 2)
    for n in (2, 3, 4, 5):
        worst = max(worst, stabilization_error(random_hamiltonian(n, 3 * n, rng), n // 2 or 1))
    report(3, "stabilization property", worst <= 1e-10, f"max |<s> - 1| = {worst:.2e}")


def test_c04_h2_code_state(report):
    u = load_circuit(data_path("h2_g2_diagonalizer.circ"), 4)
    psi = dense_circuit(u.inverse()) @ ket("1100")
    target = (ket("1100") + ket("0011")) / np.sqrt(2)
    err = float(np.max(np.abs(psi - target)))
    report(4, "H2 code state reproduction", err <= 1e-12, f"max amplitude error {err:.2e}")


def test_c05_chemical_accuracy(report):
    t0 = time.perf_counter()
    rep = run_experiment(h2(), VqeConfig("combined_codes", 1))
    elapsed = time.perf_counter() - t0
    err = abs(rep["E_opt"] - rep["E_exact"])
    ok = err <= 1e-3 and rep["iterations"] <= 100 and elapsed < 30
    report(5, "chemical accuracy on H2", ok,
           f"E_opt={rep['E_opt']:.8f} E_exact={rep['E_exact']:.8f} |err|={err:.2e} in {rep['iterations']} it, {elapsed:.2f}s")


def test_c06_single_code_vs_hf(report):
    rep = run_experiment(h2(), VqeConfig("single_code"))
    e_hf = hf_energy(h2().operator, 2)
    ok = rep["E_opt"] <= e_hf + 1e-6
    report(6, "single code vs HF", ok, f"best single-code {rep['E_opt']:.8f} vs E_HF {e_hf:.8f}")


def test_c07_fastpath(report):
    rng = np.random.default_rng(SEED)
    worst = fastpath_gap(h2().operator, 2, rng, 50)
    for k in range(15):
        n = 4 + k % 3
        worst = max(worst, fastpath_gap(random_hamiltonian(n, 2 * n, rng), n // 2, rng, 10))
    report(7, "fast-path equivalence", worst <= 1e-10, f"200 vectors, max |dE| = {worst:.2e}")


def test_c08_gradient(report):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    kinds = ("single_code", "combined_codes", "vha", "vha_grouped")
    for k in range(50):
        if k < 4:
            h = h2().operator
            n_e = 2
        else:
            n = 2 + k % 3
            h = random_hamiltonian(n, 2 + n, rng)
            n_e = max(1, n // 2)
        worst = max(worst, gradient_gap(random_circuit(kinds[k % 4], h, n_e), h, rng))
    report(8, "gradient correctness", worst <= 1e-6, f"50 instances, max |shift - FD| = {worst:.2e}")


def test_c09_layer_monotonicity(report):
    rng = np.random.default_rng(SEED)
    e1, e2 = layer_gap(h2().operator, 2)
    worst = e2 - e1
    for _ in range(10):
        a, b = layer_gap(random_hamiltonian(4, 6, rng), 2)
        worst = max(worst, b - a)
    report(9, "layer monotonicity", worst <= 1e-9, f"H2 L1={e1:.10f} L2={e2:.10f}; max(E_L2 - E_L1) = {worst:.2e}")


def test_c10_parameter_counts(report):
    h = h2().operator
    parts = order_groups(partition(h))
    diags = [diagonalize_group(g) for g in parts]
    n_vha = vha(h, 2).n_params
    cca = combined_codes(parts, diags, 2)
    n, m = h.n_qubits, len(parts)
    ok = n_vha == 14 and cca.n_params == 3 * n * m and cca.meta.get("param_convention") == "3nm" and cca.meta.get("note")
    report(10, "parameter counts", bool(ok), f"VHA {n_vha}, combined codes {cca.n_params} = 3*{n}*{m} ({cca.meta.get('param_convention')})")


def test_c11_large_random(report):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    checks = {}
    checks["diag"] = sum(diagonalization_failures(random_commuting_sum(n, n + 2, rng), dense_up_to=0) for n in range(6, 13))
    checks["stab"] = max(stabilization_error(random_hamiltonian(n, n, rng), n // 2) for n in (8, 10, 12))
    checks["fast"] = max(fastpath_gap(random_hamiltonian(n, n, rng), n // 2, rng, 4) for n in (8, 10, 12))
    grad = 0.0
    for n, kind in ((8, "single_code"), (12, "single_code"), (6, "vha_grouped"), (6, "combined_codes")):
        h = random_hamiltonian(n, 4, rng)
        grad = max(grad, gradient_gap(random_circuit(kind, h, n // 2), h, rng))
    checks["grad"] = grad
    layers = [layer_gap(random_hamiltonian(n, 3, rng), n // 2, max_iterations=5) for n in (8, 12)]
    checks["layers"] = max(b - a for a, b in layers)
    ok = (checks["diag"] == 0 and checks["stab"] <= 1e-10 and checks["fast"] <= 1e-10
          and checks["grad"] <= 1e-6 and checks["layers"] <= 1e-9)
    detail = (f"up to 12 qubits: diag failures {checks['diag']}, stab {checks['stab']:.1e}, fast-path {checks['fast']:.1e}, "
              f"gradient {checks['grad']:.1e}, layer gap {checks['layers']:.1e} ({time.perf_counter() - t0:.1f}s)")
    report(11, "large random property suite", ok, detail)


if __name__ == "__main__":
    failed = 0

    def emit(number, name, ok, detail):
        global failed
        failed += not ok
        print(_line(number, name, ok, detail))

    for name, fn in sorted(globals().copy().items()):
        if name.startswith("test_c"):
            fn(emit)
    sys.exit(1 if failed else 0)

"""Property checks on seeded random Hamiltonians, optionally saved as input files.

Stands in for molecular Hamiltonians that are not bundled: each instance is
grouped, diagonalized, checked for stabilization, fast-path agreement and
shift-rule gradients, then optimized with one and two combined-codes layers.

    python scripts/random_properties.py --qubits 4 8 12 --terms 6 --save-dir hams/
"""

import argparse
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from codespace_vqe import (
    Hamiltonian,
    VqeConfig,
    diagonalize_group,
    expectation,
    fastpath_expectation,
    gradient,
    order_groups,
    partition,
    run,
    run_experiment,
    sign_assignment,
    single_code,
    stabilizer_state,
)
from codespace_vqe.instances import random_hamiltonian
from codespace_vqe.pauli import dump_hamiltonian
from codespace_vqe.simulator import pauli_expectation


@dataclass
class PropertyConfig:
    qubits: list[int] = field(default_factory=lambda: [4, 6, 8])
    terms: int = 6
    instances: int = 2
    seed: int = 1
    max_iterations: int = 20
    save_dir: str | None = None


def check(h, n_e, rng, max_iterations) -> dict:
    parts = order_groups(partition(h))
    stab = fast = 0.0
    for g in parts:
        u = diagonalize_group(g)
        psi = stabilizer_state(u, n_e)
        stab = max(stab, *(abs(pauli_expectation(psi, e) - 1) for e in sign_assignment(g, u, n_e).elements))
        c = single_code(u, n_e)
        theta = rng.uniform(-np.pi, np.pi, c.n_params)
        fast = max(fast, abs(fastpath_expectation(u, theta, n_e, h) - expectation(run(c, theta), h)))
    c = single_code(diagonalize_group(parts[0]), n_e)
    theta = rng.uniform(-np.pi, np.pi, c.n_params)
    g = gradient(c, h, theta)
    k = int(rng.integers(c.n_params))
    e = np.zeros_like(theta)
    e[k] = 1e-5
    fd = (fastpath_expectation(c.meta["clifford"], theta + e, n_e, h) - fastpath_expectation(c.meta["clifford"], theta - e, n_e, h)) / 2e-5
    rep = run_experiment(Hamiltonian(h, n_e), VqeConfig(layers=2, max_iterations=max_iterations), exact=h.n_qubits <= 12)
    e1, e2 = (r["energy"] for r in rep["per_layer"])
    return {"groups": len(parts), "stab": stab, "fast": fast, "grad": abs(g[k] - fd), "E_L1": e1, "E_L2": e2, "E_exact": rep["E_exact"]}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--qubits", type=int, nargs="+", default=[4, 6, 8])
    p.add_argument("--terms", type=int, default=6)
    p.add_argument("--instances", type=int, default=2)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--max-iter", type=int, default=20)
    p.add_argument("--save-dir")
    a = p.parse_args(argv)
    cfg = PropertyConfig(a.qubits, a.terms, a.instances, a.seed, a.max_iter, a.save_dir)

    rng = np.random.default_rng(cfg.seed)
    for n in cfg.qubits:
        for i in range(cfg.instances):
            h = random_hamiltonian(n, cfg.terms, rng)
            n_e = max(1, n // 2)
            if cfg.save_dir:
                out = Path(cfg.save_dir)
                out.mkdir(parents=True, exist_ok=True)
                (out / f"random_n{n}_{i}.ham").write_text(dump_hamiltonian(h, electrons=n_e))
            r = check(h, n_e, rng, cfg.max_iterations)
            print(f"n={n:2d} #{i} groups={r['groups']} stab={r['stab']:.1e} fast={r['fast']:.1e} grad={r['grad']:.1e} "
                  f"L1={r['E_L1']:.8f} L2={r['E_L2']:.8f} exact={r['E_exact']:.8f}")


if __name__ == "__main__":
    main()

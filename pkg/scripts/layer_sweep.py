"""Combined-codes energy error against the number of layers.

Layers are grown with warm starts, so the error column never increases.

    python scripts/layer_sweep.py ham.ham --max-layers 3 --out sweep.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from codespace_vqe import VqeConfig, data_path, run_experiment


@dataclass
class SweepConfig:
    hamiltonian: str = str(data_path("h2.ham"))
    max_layers: int = 3
    max_iterations: int = 100
    electrons: int | None = None


def sweep(cfg: SweepConfig) -> list[dict]:
    rep = run_experiment(cfg.hamiltonian, VqeConfig(layers=cfg.max_layers, max_iterations=cfg.max_iterations), cfg.electrons)
    n_block = 3 * rep["n_qubits"] * rep["n_groups"]
    return [
        {"layers": r["layers"], "params": n_block * r["layers"], "energy": r["energy"],
         "error_Ha": r["energy"] - rep["E_exact"], "iterations": r["iterations"]}
        for r in rep["per_layer"]
    ]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("hamiltonian", nargs="?", default=SweepConfig.hamiltonian)
    p.add_argument("--max-layers", type=int, default=SweepConfig.max_layers)
    p.add_argument("--max-iter", type=int, default=SweepConfig.max_iterations)
    p.add_argument("--electrons", type=int)
    p.add_argument("--out", help="CSV file (default: stdout)")
    a = p.parse_args(argv)
    rows = sweep(SweepConfig(a.hamiltonian, a.max_layers, a.max_iter, a.electrons))
    fh = open(a.out, "w", newline="") if a.out else sys.stdout
    writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    if a.out:
        fh.close()


if __name__ == "__main__":
    main()

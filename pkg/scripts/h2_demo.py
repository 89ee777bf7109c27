"""Walk the bundled H2 Hamiltonian through every stage and every ansatz.

    python scripts/h2_demo.py
"""

from codespace_vqe import (
    VqeConfig,
    data_path,
    diagonalize_group,
    load_hamiltonian,
    order_groups,
    partition,
    run_experiment,
    sign_assignment,
)
from codespace_vqe.cli import count_rows


def main():
    ham = load_hamiltonian(data_path("h2.ham"))
    parts = order_groups(partition(ham.operator))
    for g in parts:
        u = diagonalize_group(g)
        stab = sign_assignment(g, u, ham.electrons)
        print(f"group {g.index}: {len(g)} terms, 1-norm {g.one_norm:.4f}, diagonalizer {len(u)} gates")
        print("  stabilizers:", ", ".join(str(e) for e in stab.elements))

    print()
    for kind in ("single_code", "combined_codes", "vha", "vha_grouped"):
        rep = run_experiment(ham, VqeConfig(kind))
        print(f"{kind:15s} params={rep['params']:3d} E_opt={rep['E_opt']:.8f} "
              f"error={rep['error_Ha']:.2e} iterations={rep['iterations']} ({rep['converged_reason']})")
    print(f"E_HF={rep['E_HF']:.8f} E_exact={rep['E_exact']:.8f}")

    print()
    for row in count_rows(ham, ham.electrons):
        print(f"{row['ansatz']:15s} two-qubit={row['two_qubit']:3d} single-qubit={row['single_qubit']:3d} "
              f"params={row['parameters']:3d} [{row['convention']}]")


if __name__ == "__main__":
    main()

"""Command-line entry point: ``codespace-vqe {group,diagonalize,vqe,counts,exact}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from .circuit import combined_codes, compile_and_count, single_code, vha
from .clifford import conjugate_by_circuit, diagonalize_group, sign_assignment, stabilizer_state
from .grouping import order_groups, partition
from .oracle import ground_energy, hf_energy
from .pauli import is_diagonal, load_hamiltonian
from .simulator import pauli_expectation
from .vqe import VqeConfig, run_experiment

log = logging.getLogger("codespace_vqe")

SUMMARY_COLUMNS = [
    "molecule", "geometry", "ansatz", "layers", "n_qubits", "n_groups", "params", "two_qubit_gates",
    "E_HF", "E_exact", "E_opt", "error_Ha", "iterations", "fevals", "converged_reason",
]
COUNT_COLUMNS = ["molecule", "ansatz", "n_qubits", "n_groups", "two_qubit", "single_qubit", "parameters", "convention"]


class CliError(Exception):
    pass


def _ansatz_name(text: str) -> str:
    return text.replace("-", "_")


def _electrons(ham, flag):
    n_e = flag if flag is not None else ham.electrons
    if n_e is None:
        raise CliError(f"{ham.name}: electron count missing (use --electrons or an 'electrons:' header)")
    return n_e


def _load(path):
    try:
        return load_hamiltonian(path)
    except (OSError, ValueError) as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(args, name: str, text: str) -> None:
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _stamp(args, payload: dict) -> dict:
    if not args.no_timestamp:
        payload["timestamp"] = datetime.now(timezone.utc).isoformat()
    return payload


def cmd_group(args) -> int:
    for path in args.hamiltonians:
        ham = _load(path)
        parts = order_groups(partition(ham.operator))
        payload = _stamp(args, {"source": str(path), **parts.to_dict()})
        _emit(args, f"{Path(path).stem}_groups.json", json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_diagonalize(args) -> int:
    for path in args.hamiltonians:
        ham = _load(path)
        n_e = _electrons(ham, args.electrons)
        parts = order_groups(partition(ham.operator))
        groups = []
        for g in parts:
            u = diagonalize_group(g)
            for s in g.terms.strings:
                image = conjugate_by_circuit(s, u)
                if not is_diagonal(image) or image.phase % 2:
                    raise CliError(f"group {g.index}: {s.to_text()} not diagonalized")
            stab = sign_assignment(g, u, n_e)
            psi = stabilizer_state(u, n_e)
            for e in stab.elements:
                if abs(pauli_expectation(psi, e) - 1) > 1e-10:
                    raise CliError(f"group {g.index}: {e} does not stabilize the code state")
            groups.append({**g.to_dict(), "circuit": u.to_text().splitlines(), "stabilizers": stab.to_dict()})
        payload = _stamp(args, {"source": str(path), "n_electrons": n_e, "groups": groups})
        _emit(args, f"{Path(path).stem}_diagonalizers.json", json.dumps(payload, indent=2) + "\n")
    return 0


def _config(args) -> VqeConfig:
    return VqeConfig(
        ansatz=_ansatz_name(args.ansatz),
        layers=args.layers,
        init_value=args.init,
        max_iterations=args.max_iter,
        step_tolerance=args.step_tol,
    )


def _vqe_job(path: str, cfg: VqeConfig, electrons):
    try:
        ham = load_hamiltonian(path)
        report = run_experiment(ham, cfg, n_electrons=_electrons(ham, electrons))
        return path, report, None
    except (OSError, ValueError, CliError) as exc:
        return path, None, str(exc)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def cmd_vqe(args) -> int:
    cfg = _config(args)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    paths = [str(p) for p in args.hamiltonians]
    threads = max(1, int(os.environ.get("CODESPACE_VQE_THREADS", "1")))
    if threads > 1 and len(paths) > 1:
        with ProcessPoolExecutor(min(threads, len(paths))) as pool:
            outcomes = list(pool.map(_vqe_job, paths, [cfg] * len(paths), [args.electrons] * len(paths)))
    else:
        outcomes = [_vqe_job(p, cfg, args.electrons) for p in paths]

    failed = 0
    rows, index = [], []
    for path, report, error in outcomes:
        stem = Path(path).stem
        if report is None:
            failed += 1
            print(f"{stem}: FAILED {error}", file=sys.stderr)
            index.append({"source": path, "error": error})
            continue
        result = report.pop("result")
        report.pop("seconds")
        trace_name = f"{stem}_{cfg.ansatz}_L{cfg.layers}.json"
        payload = _stamp(args, {"source": path, **report, "optimizer": result.to_dict()})
        (out / trace_name).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        rows.append({k: _fmt(report[k]) for k in SUMMARY_COLUMNS})
        index.append({"source": path, "trace": trace_name})
        print(f"{stem}: E_HF={report['E_HF']:.8f} E_exact={report['E_exact']:.8f} "
              f"E_opt={report['E_opt']:.8f} error={report['error_Ha']:.3e} ({report['converged_reason']})")

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    (out / "summary.csv").write_text(buf.getvalue(), encoding="utf-8")
    (out / "index.json").write_text(json.dumps(_stamp(args, {"runs": index}), indent=2) + "\n", encoding="utf-8")
    return 1 if failed else 0


def count_rows(ham, n_e: int, layers: int = 1) -> list[dict]:
    h = ham.operator
    parts = order_groups(partition(h))
    diags = [diagonalize_group(g) for g in parts]
    molecule = ham.meta.get("molecule", ham.name or "")
    circuits = [
        ("vha", vha(h, n_e, layers=layers), "one slot per non-identity term"),
        ("vha_grouped", vha(h, n_e, True, diags, parts, layers), "one slot per non-identity term"),
        ("combined_codes", combined_codes(parts, diags, n_e, layers), "3nm"),
    ]
    circuits += [(f"single_code_{g.index}", single_code(u, n_e), "3n") for g, u in zip(parts, diags)]
    rows = []
    for name, c, convention in circuits:
        counts = compile_and_count(c)
        rows.append({
            "molecule": molecule, "ansatz": name, "n_qubits": h.n_qubits, "n_groups": len(parts),
            "two_qubit": counts.two_qubit, "single_qubit": counts.single_qubit,
            "parameters": counts.parameters, "convention": convention,
        })
    return rows


def cmd_counts(args) -> int:
    rows = []
    for path in args.hamiltonians:
        ham = _load(path)
        rows += count_rows(ham, _electrons(ham, args.electrons), args.layers)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COUNT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(args, "counts.csv", buf.getvalue())
    return 0


def cmd_exact(args) -> int:
    for path in args.hamiltonians:
        ham = _load(path)
        n_e = _electrons(ham, args.electrons)
        e0, _ = ground_energy(ham.operator)
        print(f"{Path(path).stem}: E_HF={hf_energy(ham.operator, n_e):.10f} E_exact={e0:.10f}")
    return 0


COMMANDS = {
    "group": cmd_group,
    "diagonalize": cmd_diagonalize,
    "vqe": cmd_vqe,
    "counts": cmd_counts,
    "exact": cmd_exact,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codespace-vqe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("hamiltonians", nargs="+", help="Hamiltonian text files")
    common.add_argument("--electrons", type=int, default=None)
    common.add_argument("--ansatz", default="combined-codes",
                        choices=["combined-codes", "single-code", "vha", "vha-grouped"])
    common.add_argument("--layers", type=int, default=1)
    common.add_argument("--max-iter", type=int, default=100)
    common.add_argument("--step-tol", type=float, default=1e-6)
    common.add_argument("--init", type=float, default=0.001)
    common.add_argument("--out", default=None, help="output directory (default: stdout / cwd)")
    common.add_argument("--no-timestamp", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

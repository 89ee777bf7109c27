import csv
import json

import numpy as np
import pytest

from codespace_vqe import data_path
from codespace_vqe.cli import COUNT_COLUMNS, SUMMARY_COLUMNS, main
from codespace_vqe.instances import random_hamiltonian
from codespace_vqe.pauli import dump_hamiltonian

H2 = str(data_path("h2.ham"))


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_group_json(tmp_path):
    assert main(["group", H2, "--out", str(tmp_path), "--no-timestamp"]) == 0
    data = json.loads((tmp_path / "h2_groups.json").read_text())
    assert len(data["groups"]) == 2
    assert data["groups"][0]["is_z_only"] and len(data["groups"][0]["terms"]) == 11
    assert data["groups"][1]["one_norm"] == pytest.approx(0.1812)


def test_group_empty_file(tmp_path, capsys):
    empty = tmp_path / "empty.ham"
    empty.write_text("")
    assert main(["group", str(empty)]) != 0
    assert "error" in capsys.readouterr().err


def test_group_random_file(tmp_path):
    h = random_hamiltonian(4, 20, np.random.default_rng(3))
    path = tmp_path / "rand.ham"
    path.write_text(dump_hamiltonian(h, electrons=2))
    assert main(["group", str(path), "--out", str(tmp_path), "--no-timestamp"]) == 0
    data = json.loads((tmp_path / "rand_groups.json").read_text())
    assert sum(len(g["terms"]) for g in data["groups"]) == len(h)


def test_diagonalize(tmp_path):
    assert main(["diagonalize", H2, "--out", str(tmp_path), "--no-timestamp"]) == 0
    data = json.loads((tmp_path / "h2_diagonalizers.json").read_text())
    assert data["groups"][0]["circuit"] == []
    assert data["groups"][1]["circuit"]
    assert "-Z0" in data["groups"][0]["stabilizers"]["elements"]


def test_vqe_combined_codes(tmp_path, capsys):
    assert main(["vqe", H2, "--ansatz", "combined-codes", "--layers", "1", "--out", str(tmp_path), "--no-timestamp"]) == 0
    rows = read_csv(tmp_path / "summary.csv")
    assert list(rows[0].keys()) == SUMMARY_COLUMNS
    assert abs(float(rows[0]["error_Ha"])) <= 1e-3
    trace = json.loads((tmp_path / "h2_combined_codes_L1.json").read_text())
    assert trace["optimizer"]["trace"][-1]["energy"] == trace["E_opt"]
    assert "E_exact" in capsys.readouterr().out


def test_vqe_vha_parameter_count(tmp_path):
    assert main(["vqe", H2, "--ansatz", "vha", "--out", str(tmp_path), "--no-timestamp"]) == 0
    assert read_csv(tmp_path / "summary.csv")[0]["params"] == "14"


def test_vqe_two_layers(tmp_path):
    assert main(["vqe", H2, "--layers", "2", "--out", str(tmp_path), "--no-timestamp"]) == 0
    trace = json.loads((tmp_path / "h2_combined_codes_L2.json").read_text())
    e1, e2 = (r["energy"] for r in trace["per_layer"])
    assert e2 <= e1 + 1e-9


def test_vqe_failure_continues(tmp_path):
    bad = tmp_path / "bad.ham"
    bad.write_text("qubits: 2\n0.1 Q0\n")
    assert main(["vqe", str(bad), H2, "--out", str(tmp_path), "--no-timestamp"]) == 1
    assert len(read_csv(tmp_path / "summary.csv")) == 1


def test_vqe_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["vqe", H2, "--out", str(out), "--no-timestamp"]) == 0
    for name in ("summary.csv", "index.json", "h2_combined_codes_L1.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_counts(tmp_path):
    assert main(["counts", H2, "--out", str(tmp_path)]) == 0
    rows = {r["ansatz"]: r for r in read_csv(tmp_path / "counts.csv")}
    assert list(next(iter(rows.values())).keys()) == COUNT_COLUMNS
    assert rows["vha"]["parameters"] == "14"
    assert rows["vha"]["two_qubit"] == "36"
    assert rows["combined_codes"]["parameters"] == "24"
    assert rows["combined_codes"]["convention"] == "3nm"


def test_exact(capsys):
    assert main(["exact", H2]) == 0
    out = capsys.readouterr().out
    assert "E_HF=-1.1170000000" in out and "E_exact=-1.13754980" in out


def test_missing_electrons(tmp_path):
    path = tmp_path / "noe.ham"
    path.write_text("qubits: 2\n0.5 Z0\n0.1 X0 X1\n")
    assert main(["exact", str(path)]) == 2
    assert main(["exact", str(path), "--electrons", "1"]) == 0

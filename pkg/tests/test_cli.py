import json

import numpy as np
import pytest

import infodist as qd
from infodist import serialize
from infodist.cli import main


@pytest.fixture()
def qubit_basis_file(tmp_path):
    path = tmp_path / "basis.json"
    path.write_text(serialize.dumps(serialize.povm_to_json(qd.basis_povm(2))))
    return str(path)


def test_mub_writes_bases(tmp_path, capsys):
    out = tmp_path / "mub.json"
    assert main(["mub", "--p", "3", "--n", "1", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["d"] == 3 and len(obj["bases"]) == 4

    assert main(["mub", "--p", "3", "--n", "2", "--out", str(tmp_path / "mub9.json")]) == 0
    obj9 = json.loads((tmp_path / "mub9.json").read_text())
    assert obj9["d"] == 9 and len(obj9["bases"]) == 10


def test_mub_rejects_even_prime(capsys):
    assert main(["mub", "--p", "2"]) == 1
    assert "even prime unsupported" in capsys.readouterr().err


def test_design_check_pass_and_fail(tmp_path, capsys):
    mub = tmp_path / "mub5.json"
    assert main(["mub", "--p", "5", "--out", str(mub)]) == 0
    assert main(["design-check", "--in", str(mub), "--trials", "50"]) == 0

    single = tmp_path / "single.json"
    single.write_text(serialize.dumps([serialize.matrix_to_json(np.eye(2))]))
    assert main(["design-check", "--in", str(single), "--trials", "20"]) == 1

    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert main(["design-check", "--in", str(empty), "--trials", "5"]) == 2
    missing = str(tmp_path / "nope.json")
    assert main(["design-check", "--in", missing, "--trials", "5"]) == 2


def test_disturbance_methods(qubit_basis_file, capsys):
    assert main(["disturbance", "--povm", qubit_basis_file, "--method", "exact"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["disturbance"] == pytest.approx(1 / 3, abs=1e-12)

    assert main(["disturbance", "--povm", qubit_basis_file, "--method", "mc", "--samples", "20000", "--seed", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert abs(report["avg_fidelity"] - 2 / 3) < 5 * report["stderr"]

    # no odd-prime-power design in dimension 2
    assert main(["disturbance", "--povm", qubit_basis_file, "--method", "design"]) == 1


def test_disturbance_design_method(tmp_path, capsys):
    path = tmp_path / "qutrit.json"
    path.write_text(serialize.dumps(serialize.povm_to_json(qd.basis_povm(3))))
    assert main(["disturbance", "--povm", str(path), "--method", "design"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["avg_fidelity"] == pytest.approx(0.5, abs=1e-12)
    assert report["method"] == "design"


def test_disturbance_trivial_povm(tmp_path, capsys):
    path = tmp_path / "trivial.json"
    path.write_text(serialize.dumps(serialize.povm_to_json(qd.POVM(2, (np.eye(2, dtype=complex),)))))
    assert main(["disturbance", "--povm", str(path), "--method", "exact"]) == 0
    assert json.loads(capsys.readouterr().out)["disturbance"] == pytest.approx(0.0, abs=1e-12)


def test_disturbance_rejects_invalid_povm(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(serialize.dumps({"dim": 2, "effects": [serialize.matrix_to_json(np.eye(2) / 2)]}))
    assert main(["disturbance", "--povm", str(bad)]) == 1
    assert "completeness" in capsys.readouterr().err


def test_info_command(qubit_basis_file, capsys):
    assert main(["info", "--povm", qubit_basis_file, "--samples", "20000", "--seed", "1"]) == 0
    nats = json.loads(capsys.readouterr().out)
    assert abs(nats["mutual_info"] - (np.log(2) - 0.5)) < 5 * nats["stderr"]

    assert main(["info", "--povm", qubit_basis_file, "--samples", "20000", "--seed", "1", "--bits"]) == 0
    bits = json.loads(capsys.readouterr().out)
    assert bits["log_base"] == "bits"
    assert bits["mutual_info"] == pytest.approx(nats["mutual_info"] / np.log(2), abs=1e-12)


def test_info_trivial(tmp_path, capsys):
    path = tmp_path / "trivial.json"
    path.write_text(serialize.dumps(serialize.povm_to_json(qd.POVM(2, (np.eye(2, dtype=complex),)))))
    assert main(["info", "--povm", str(path), "--samples", "100"]) == 0
    assert json.loads(capsys.readouterr().out)["mutual_info"] == 0.0


def test_seed_env_and_flag_precedence(qubit_basis_file, capsys, monkeypatch):
    monkeypatch.setenv("QF_SEED", "11")
    assert main(["info", "--povm", qubit_basis_file, "--samples", "2000"]) == 0
    from_env = capsys.readouterr().out
    assert main(["info", "--povm", qubit_basis_file, "--samples", "2000", "--seed", "11"]) == 0
    assert capsys.readouterr().out == from_env
    assert main(["info", "--povm", qubit_basis_file, "--samples", "2000", "--seed", "12"]) == 0
    assert capsys.readouterr().out != from_env


def test_repeated_runs_are_byte_identical(qubit_basis_file, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        assert main(["disturbance", "--povm", qubit_basis_file, "--method", "mc", "--samples", "5000", "--seed", "7", "--out", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_frontier_command(tmp_path):
    csv_path = tmp_path / "curve.csv"
    json_path = tmp_path / "curve.json"
    code = main([
        "frontier", "--d", "2", "--grid", "3", "--samples", "30", "--restarts", "2",
        "--max-iter", "60", "--seed", "0", "--out", str(csv_path), "--json", str(json_path),
        "--allow-nonconverged",
    ])
    assert code == 0
    lines = csv_path.read_text().strip().split("\n")
    assert lines[0] == "p,disturbance,info_lb_nats,line_info_nats,converged"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert float(first[0]) == 0.0 and float(first[2]) == 0.0
    last = lines[-1].split(",")
    assert float(last[1]) == pytest.approx(1 / 3, abs=1e-12)
    meta = json.loads(json_path.read_text())
    assert len(meta) == 3 and "optimizer_meta" in meta[0]


def test_frontier_nonconverged_soft_failure(tmp_path):
    code = main([
        "frontier", "--d", "2", "--grid", "2", "--samples", "30", "--restarts", "1",
        "--max-iter", "5", "--seed", "0", "--out", str(tmp_path / "c.csv"),
    ])
    assert code == 3


def test_twirl_check(qubit_basis_file, capsys):
    assert main(["twirl-check", "--povm", qubit_basis_file, "--samples", "3000", "--seed", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is True
    assert report["p_star"] == pytest.approx(2 / 3, abs=1e-12)


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["disturbance"])  # missing --povm
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2

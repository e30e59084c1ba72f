from __future__ import annotations

import csv
import io
import json

import pytest

from projlab.cli import main


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def rows(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def test_werner_table_default_rows(capsys):
    code, out = run(capsys, "werner-table", "--shots", "20000", "--seed", "2")
    assert code == 0
    table = {r["state"]: r for r in rows(out)}
    assert list(table) == ["singlet", "pizza", "werner(0.3,2)", "00", "11", "random_pure(7)"]
    for name in ("singlet", "pizza", "werner(0.3,2)", "00", "11"):
        assert abs(float(table[name]["true_value"])) < 1e-9
        assert abs(float(table[name]["noiseless"])) < 1e-9
    rand = table["random_pure(7)"]
    assert float(rand["true_value"]) > 0
    assert float(rand["true_value"]) == pytest.approx(float(rand["noiseless"]), abs=1e-9)


def test_werner_table_hoeffding_shots(capsys, tmp_path):
    out_path = tmp_path / "w.json"
    code, _ = run(capsys, "werner-table", "--state", "singlet", "--epsilon", "0.1", "--delta", "0.05", "--format", "json", "--out", str(out_path))
    assert code == 0
    data = json.loads(out_path.read_text())
    assert data[0]["state"] == "singlet"
    assert abs(data[0]["shot_noise"]) < 0.1


@pytest.mark.parametrize(
    "state, cut, r_max, series, verdict",
    [
        ("bell", None, 2, {"1": 0.25, "2": 0.0}, 2),
        ("w", "q1,q2", 2, {"1": 2 / 9, "2": 0.0}, 2),
        ("00", "q1", 1, {"1": 0.0}, 1),
    ],
)
def test_schmidt_scan(capsys, state, cut, r_max, series, verdict):
    argv = ["schmidt-scan", "--state", state, "--r-max", str(r_max)]
    if cut:
        argv += ["--cut", cut]
    code, out = run(capsys, *argv)
    assert code == 0
    data = json.loads(out)
    for r, value in series.items():
        assert data["exact"][r] == pytest.approx(value, abs=1e-9)
    assert data["verdict"] == verdict
    assert data["sampled"] is None


def test_schmidt_scan_sampled_csv(capsys):
    code, out = run(capsys, "schmidt-scan", "--state", "bell", "--shots", "1000", "--format", "csv")
    assert code == 0
    table = rows(out)
    assert [r["r"] for r in table] == ["1", "2"]
    assert table[1]["sampled"] == "0"


def test_sym_anti_table_rep(capsys):
    code, out = run(capsys, "sym-anti", "--state", "00", "--rep", "s3-two-qubit")
    table = {r["outcome"]: r for r in rows(out)}
    assert float(table["10"]["circuit"]) == pytest.approx(0.75)
    assert float(table["01"]["circuit"]) == pytest.approx(0.25)
    for r in table.values():
        assert float(r["circuit"]) == pytest.approx(float(r["oracle"]), abs=1e-9)


def test_res_identity_exact_matches_oracle(capsys):
    code, out = run(capsys, "res-identity", "--state", "random_pure:seed=2,dims=2x2", "--unitary", "swap")
    assert code == 0
    for r in rows(out):
        assert float(r["circuit_diff"]) == pytest.approx(float(r["oracle_diff"]), abs=1e-9)


@pytest.mark.parametrize(
    "argv, value",
    [
        (["--A", "X", "--B", "Z"], 1.0),
        (["--A", "Z", "--B", "Z"], 0.0),
        (["--A", "H", "--B", "Z", "--input", "0"], 0.5),
        (["--A", "X", "--B", "Z", "--input", "mixed"], 1.0),
        (["--A", "XZ", "--B", "ZZ", "--input", "max"], 1.0),
    ],
)
def test_commutator(capsys, argv, value):
    code, out = run(capsys, "commutator", *argv)
    (row,) = rows(out)
    assert float(row["circuit"]) == pytest.approx(value, abs=1e-9)
    assert float(row["oracle"]) == pytest.approx(value, abs=1e-9)


def test_commutator_bch_agrees(capsys):
    code, out = run(capsys, "commutator", "--A", "H", "--B", "Z", "--mode", "bch", "--format", "json")
    (row,) = json.loads(out)
    assert row["circuit"] == pytest.approx(row["oracle"], abs=1e-9)


def test_twelve_significant_digits(capsys):
    _, out = run(capsys, "schmidt-scan", "--state", "w", "--cut", "q1,q2", "--r-max", "1", "--format", "csv")
    assert rows(out)[0]["exact"] == "0.222222222222"


def test_seeded_runs_identical(capsys):
    _, a = run(capsys, "res-identity", "--state", "w", "--shots", "5000", "--seed", "4")
    _, b = run(capsys, "res-identity", "--state", "w", "--shots", "5000", "--seed", "4")
    assert a == b


def test_verify_passes_and_mutation_fails(capsys):
    code, out = run(capsys, "verify")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert all(c["margin"] >= 0 for c in report["checks"])
    code, out = run(capsys, "verify", "--scope", "constructions", "--mutate", "drop-zbar")
    failed = {c["name"] for c in json.loads(out)["checks"] if not c["passed"]}
    assert code == 1
    assert "antisymmetric-test" in failed


def test_verify_tight_tolerance_is_expected_fail(capsys):
    code, out = run(capsys, "verify", "--tolerance", "1e-15")
    report = json.loads(out)
    assert code == 1
    assert any(not c["passed"] for c in report["checks"])
    # exact integer checks still pass at any tolerance
    assert next(c for c in report["checks"] if c["name"] == "barenco-parity")["passed"]


def test_unknown_state_is_an_error(capsys):
    assert main(["sym-anti", "--state", "cat"]) == 2
    assert "unknown state" in capsys.readouterr().err

"""Command-line interface: outcomes, exit codes, determinism, re-verification."""

import json
from pathlib import Path

import pytest

from koszulkit.cli import main

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def structured(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "structured")
    return code, json.loads(out)


def test_tot_emits_koszul_complex(capsys):
    code, rep = structured(capsys, "tot", "--doc", DATA / "typ_xy.kz")
    assert code == 0 and rep["outcome"] == "pass"
    assert "d 1 = 1x2 [x, y]" in rep["data"]["tot"]
    assert rep["data"]["homology"]["1"] == "0" and rep["data"]["homology"]["2"] == "0"
    assert rep["data"]["homology"]["0"] != "0"


def test_check_koszul_non_monic_fails(capsys):
    code, rep = structured(capsys, "check-koszul", "--doc", DATA / "nonmonic.kz")
    assert code == 1 and rep["outcome"] == "fail"


def test_check_koszul_pass(capsys):
    code, _, _ = run(capsys, "check-koszul", "--doc", DATA / "koszul_xyz.kz")
    assert code == 0


def test_inconclusive_exit_code(capsys, tmp_path):
    doc = tmp_path / "deep.kz"
    doc.write_text("koszulkit 1\nring QQ[x]\nsequence fs = a: x\ncube X : a\n  vertex {} 1\n  vertex {a} 1\n"
                   "  boundary {a} a = 1x1 [x^5]\nend\n")
    code, rep = structured(capsys, "check-koszul", "--doc", doc, "--bound", 2)
    assert code == 3 and rep["outcome"] == "inconclusive"
    assert run(capsys, "check-koszul", "--doc", doc)[0] == 0


@pytest.mark.parametrize("argv", [
    ["no-such-command"],
    ["tot"],
    ["tot", "--doc", "/nonexistent/file.kz"],
    ["tot", "--doc", DATA / "complex.kz"],
    ["suite", "--property", "nope", "--count", 1],
    ["tot", "--doc", DATA / "typ_xy.kz", "--name", "missing"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_parse_error_is_usage_error(capsys, tmp_path):
    bad = tmp_path / "bad.kz"
    bad.write_text("koszulkit 1\nring QQ[x]\npoly f = x^^2\n")
    code, _, err = run(capsys, "gb", "--doc", bad)
    assert code == 2 and "line 3" in err


@pytest.mark.parametrize("cmd,doc,extra", [
    ("check-admissible", "typ_xy.kz", []),
    ("homology", "complex.kz", []),
    ("wgp", "koszul_xyz.kz", []),
    ("quasi-split", "koszul_xyz.kz", []),
    ("gb", "ideal.kz", []),
    ("snf", "snf.kz", []),
    ("tq", "cubemaps.kz", []),
    ("zigzag", "double.kz", []),
    ("cone-compare", "doublemap.kz", []),
    ("solid", "lwmap.kz", []),
])
def test_commands_pass(capsys, cmd, doc, extra):
    code, rep = structured(capsys, cmd, "--doc", DATA / doc, *extra)
    assert code == 0, rep


def test_tq_failure(capsys):
    assert run(capsys, "tq", "--doc", DATA / "cubemaps.kz", "--name", "times_x")[0] == 1


def test_gb_membership(capsys):
    _, rep = structured(capsys, "gb", "--doc", DATA / "ideal.kz")
    assert rep["data"]["membership"] == {"f": True, "g": False}


def test_snf_values(capsys):
    _, rep = structured(capsys, "snf", "--doc", DATA / "snf.kz")
    assert rep["data"]["invariant_factors"] == ["2", "6", "12"]


def test_certificate_reverifies(capsys, tmp_path):
    out = tmp_path / "z.json"
    assert run(capsys, "zigzag", "--doc", DATA / "double.kz", "--format", "structured", "--out", out)[0] == 0
    assert run(capsys, "verify", "--doc", out)[0] == 0
    cert = json.loads(out.read_text())["data"]["certificate"]
    bad = tmp_path / "bad.kz"
    bad.write_text(cert.replace("<- lw", "<- qis", 1))
    assert run(capsys, "verify", "--doc", bad)[0] == 1


def test_suite_is_byte_identical(capsys):
    a = run(capsys, "suite", "--seed", 42, "--count", 3, "--format", "structured")
    b = run(capsys, "suite", "--seed", 42, "--count", 3, "--format", "structured")
    assert a[0] == 0 and a[1] == b[1]


def test_suite_parallel_matches_serial(capsys, monkeypatch):
    argv = ("suite", "--seed", 7, "--count", 2, "--property", "zigzag", "--property", "snf-oracle", "--records")
    serial = run(capsys, *argv)[1]
    monkeypatch.setenv("KOSZULKIT_THREADS", "3")
    assert run(capsys, *argv)[1] == serial


def test_suite_count_zero(capsys):
    code, rep = structured(capsys, "suite", "--count", 0)
    assert code == 0 and rep["outcome"] == "pass" and rep["checks"] == []


def test_suite_from_document(capsys):
    code, rep = structured(capsys, "suite", "--doc", DATA / "suite.kz", "--property", "totisom", "--property", "euler")
    assert code == 0 and rep["seed"] == 42
    assert rep["data"]["tallies"]["totisom"]["total"] == 5
    assert rep["data"]["tallies"]["euler"]["total"] == 3


def test_mutation_is_detected(capsys):
    code, rep = structured(capsys, "suite", "--count", 6, "--mutate", "cone-sign", "--property", "zigzag")
    assert code == 1 and rep["data"]["tallies"]["zigzag"]["fail"] > 0


def test_budget_keeps_partial_results(capsys):
    code, rep = structured(capsys, "suite", "--count", 50, "--property", "quasi-split", "--budget", 0)
    assert code == 3
    assert rep["data"]["tallies"]["quasi-split"]["total"] < 50


def test_timings_only_on_request(capsys):
    _, rep = structured(capsys, "snf", "--doc", DATA / "snf.kz")
    assert "timings" not in rep
    _, rep = structured(capsys, "snf", "--doc", DATA / "snf.kz", "--timings")
    assert rep["timings"]["seconds"] >= 0


def test_text_output(capsys):
    code, out, _ = run(capsys, "check-admissible", "--doc", DATA / "typ_xy.kz")
    assert code == 0 and out.startswith("command: check-admissible\noutcome: pass\n")


def test_out_file(capsys, tmp_path):
    out = tmp_path / "r.txt"
    run(capsys, "snf", "--doc", DATA / "snf.kz", "--out", out)
    assert "invariant_factors" in out.read_text()

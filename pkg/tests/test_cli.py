import json
import subprocess
import sys

import pytest

from ratfrob.cli import main
from ratfrob.core.text import parse_expr


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def built(tmp_path, capsys):
    path = tmp_path / "a3.json"
    assert run(capsys, "build-a", "--ell", "3", "--poles", "2", "--out", str(path))[0] == 0
    return path


class TestExitCodes:
    def test_tail_build_needs_a_pole(self, capsys):
        code, _, err = run(capsys, "build-a", "--ell", "1", "--poles", "0")
        assert code == 2
        assert "--poles" in err

    def test_unknown_example(self, capsys):
        code, _, err = run(capsys, "examples", "--name", "a9-np7")
        assert code == 2
        assert "a4-np2" in err and "qh-p1-np1" in err

    def test_missing_verb(self, capsys):
        assert run(capsys)[0] == 2

    def test_bad_points(self, capsys, built):
        assert run(capsys, "verify", "--in", str(built), "--points", "0")[0] == 2

    def test_missing_input_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", "--in", str(tmp_path / "nope.json"))
        assert code == 1
        assert json.loads(err)["passed"] is False

    @pytest.mark.parametrize("value", ["0", "-3", "many"])
    def test_thread_count_validated(self, capsys, monkeypatch, value):
        monkeypatch.setenv("FF_THREADS", value)
        code, _, err = run(capsys, "examples", "--name", "a1-np2")
        assert code == 2
        assert "FF_THREADS" in err

    def test_eaw_needs_positive_r(self, capsys):
        assert run(capsys, "build-eaw", "--ell", "1", "--r", "0", "--poles", "1")[0] == 2


def test_a4_example_exit_code(capsys):
    code, _, _ = run(capsys, "examples", "--name", "a4-np2")
    assert code == 0


def test_a4_example_reports_f(capsys):
    _, out, err = run(capsys, "examples", "--name", "a4-np2")
    doc = json.loads(out or err)
    assert doc["f"]["passed"]
    assert parse_expr(doc["f"]["built"]) == parse_expr("1/10*t_3^2 + 1/5*t_2*t_4 + 1/150*t_4^3")


@pytest.mark.parametrize("name", ["l0-m1", "a1-np2", "qh-p1-np2", "a2-r1-np1", "a3-r2-np2"])
def test_examples_pass(capsys, name):
    code, out, _ = run(capsys, "examples", "--name", name)
    assert code == 0
    assert json.loads(out)["passed"]


def test_verify_is_byte_identical(capsys, built):
    args = ("verify", "--in", str(built), "--points", "20", "--seed", "7")
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first[0] == 0
    assert first == second


def test_export_roundtrip_verifies_identically(capsys, built, tmp_path):
    exported = tmp_path / "again.json"
    assert run(capsys, "export", "--in", str(built), "--format", "json", "--out", str(exported))[0] == 0
    original = run(capsys, "verify", "--in", str(built), "--points", "5")
    again = run(capsys, "verify", "--in", str(exported), "--points", "5")
    assert original[0] == again[0] == 0
    assert original[1] == again[1]


def test_build_document_shape(tmp_path, capsys):
    code, out, _ = run(capsys, "build-eaw", "--ell", "1", "--r", "2", "--poles", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["instance"] == {"family": "EAW", "ell": 1, "r": 2, "n_poles": 2}
    assert doc["f"] == "1/4*t_1^2"
    assert doc["sigma"]["sigma_0"] == "E[t_4]^2"
    assert {x["arg"] for x in doc["logs"]} >= {"alpha_1", "alpha_2"}


def test_latex_export(capsys, built):
    code, out, _ = run(capsys, "export", "--in", str(built), "--format", "latex")
    assert code == 0
    assert out.startswith("\\begin{aligned}") and "\\log" in out


class TestInvariants:
    def test_theta(self, capsys):
        code, out, _ = run(capsys, "invariants", "--kind", "theta", "--k", "2", "--poles", "3", "--family", "a")
        assert code == 0
        assert json.loads(out)["degree"] == 5

    def test_theta_tilde_two_poles(self, capsys):
        code, out, _ = run(capsys, "invariants", "--kind", "theta-tilde", "--k", "1", "--poles", "2",
                           "--family", "eaw")
        assert code == 0
        doc = json.loads(out)
        assert doc["degree"] == doc["expected_degree"]

    def test_theta_tilde_one_pole_reports_degree(self, capsys):
        code, _, err = run(capsys, "invariants", "--kind", "theta-tilde", "--k", "0", "--poles", "1",
                           "--family", "eaw")
        doc = json.loads(err)
        assert code == 1
        assert (doc["degree"], doc["expected_degree"]) == (4, 6)

    def test_kind_family_mismatch(self, capsys):
        assert run(capsys, "invariants", "--kind", "theta", "--k", "1", "--poles", "2", "--family", "eaw")[0] == 2


def test_parallel_examples_match_sequential(capsys, monkeypatch):
    seq = run(capsys, "examples", "--all")
    monkeypatch.setenv("FF_THREADS", "3")
    par = run(capsys, "examples", "--all")
    assert seq == par


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ratfrob", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for verb in ("build-a", "build-eaw", "verify", "examples", "invariants", "export"):
        assert verb in proc.stdout

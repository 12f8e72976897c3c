import io
import json
import subprocess
import sys

import pytest

from conftest import DUP
from sptm import cli
from sptm.selftest import CheckResult

KEYS = {"command", "machine", "prior", "horizon", "result", "mass", "certificates"}


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--format", "json")
    assert code == 0, err
    rep = json.loads(out)
    assert set(rep) == KEYS
    return rep


def test_forward_golden():
    code, out, _ = run("forward", "zoo:geom", "--input", "1", "--horizon", "4")
    assert code == 0
    assert "pi(out='1' | in) = 7/8 (0.875000)" in out
    assert "pi(tau=4 | in) = 1/8" in out
    assert "  running = 1/8" in out


def test_forward_json():
    rep = run_json("forward", "zoo:geom", "--input", "1", "--horizon", "4")
    assert rep["machine"]["name"] == "geom"
    assert len(rep["machine"]["sha256"]) == 64
    assert rep["prior"] is None
    assert rep["result"]["outputs"] == [{"output": "1", "prob": "7/8", "float": 0.875}]
    assert rep["mass"]["running"] == "1/8"


def test_depth_golden():
    code, out, _ = run("depth", "zoo:mix2", "--prior", "uniform:2", "--horizon", "10", "--output", "0")
    assert code == 0
    assert "S2 = 1.584963 bits (2^-S2 = 1/3)" in out
    assert "S1_sum = 0.000000 bits (2^-S1_sum = 1/1)" in out


def test_depth_json_variants():
    rep = run_json("depth", "zoo:mix2", "--prior", "uniform:2", "--horizon", "10", "--output", "1",
                   "--variants", "S2")
    assert [d["exact"] for d in rep["result"]["depths"]] == ["1/1"]


def test_inverse_json():
    rep = run_json("inverse", "zoo:mix2", "--prior", "uniform:2", "--horizon", "10", "--output", "0")
    assert [r["prob"] for r in rep["result"]["posterior"]] == ["1/3"] * 3


def test_joint_lex():
    rep = run_json("joint", "zoo:coin1", "--prior", "faircoin:set=0+1", "--horizon", "4", "--tie-break", "lex")
    assert "--tie-break lex" in rep["command"]
    assert [r["modal"] for r in rep["result"]["modal"]] == ["0", "0"]


def test_detlimit_json():
    rep = run_json("detlimit", "zoo:mix2", "--prior", "faircoin", "--horizon", "10", "--output", "0")
    r = rep["result"]
    assert (r["K_bounded"], r["Q"], r["S2"]["exact"]) == (2, "3/4", "1/3")
    assert r["identity_holds"] and r["S1_equals_S2"]
    assert rep["certificates"]["halting_set"] == {"fn": 1, "L_max": 6, "horizon": 10}


def test_entropy_text():
    code, out, _ = run("entropy", "zoo:erase1", "--prior", "faircoin:set=0+1", "--horizon", "6",
                       "--abstraction", "retain")
    assert code == 0
    assert "expected summed backward entropy = 0.000000 bits" in out
    assert "S(in|out) = 1.000000 bits" in out


def test_classes_with_inverter(tmp_path):
    path = tmp_path / "dup.sptm"
    path.write_text(DUP)
    rep = run_json("classes", "zoo:copy1", "--prior", "faircoin:set=0+1", "--horizon", "8", "--n", "1",
                   "--inverter", str(path), "--epsilon", "1/2")
    assert rep["result"]["one_way"] == {"success": "0/1", "epsilon": "1/2", "consistent_with_one_way": True}
    assert rep["result"]["decider"]


def test_pathdepth():
    code, out, _ = run("pathdepth", "zoo:mix2", "--prior", "uniform:2", "--horizon", "10",
                       "--input", "00", "--output", "0")
    assert code == 0 and "pi(in|out) = 1/3" in out


def test_validate_file(tmp_path):
    path = tmp_path / "dup.sptm"
    path.write_text(DUP)
    rep = run_json("validate", str(path))
    assert rep["result"]["deterministic"] and rep["result"]["rules"] == 4


def test_validate_syntax_error(tmp_path):
    path = tmp_path / "bad.sptm"
    path.write_text(DUP.replace("-> t0", "=> t0"))
    code, _, err = run("validate", str(path))
    assert code == 2
    assert "line 6" in err


def test_zoo_listing():
    rep = run_json("zoo")
    assert [r["name"] for r in rep["result"]["machines"]] == [
        "copy1", "erase1", "coin1", "loop", "geom", "alt", "mix2"]


def test_prior_file(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("0\t1/3\n1\t2/3\n")
    rep = run_json("joint", "zoo:copy1", "--prior", f"file:{path}", "--horizon", "3")
    assert [r["prob"] for r in rep["result"]["out_marginal"]] == ["1/3", "2/3"]


@pytest.mark.parametrize("argv", [
    [],
    ["forward", "zoo:nope", "--input", "1", "--horizon", "3"],
    ["forward", "zoo:geom", "--input", "12", "--horizon", "3"],
    ["forward", "zoo:geom", "--input", "1", "--horizon", "-1"],
    ["forward", "zoo:geom", "--horizon", "3"],
    ["joint", "zoo:geom", "--prior", "gauss:3", "--horizon", "3"],
    ["check", "zoo:geom", "--horizon", "3", "--threads", "0"],
    ["validate", "/no/such/file"],
])
def test_usage_errors_exit_1(argv):
    assert run(*argv)[0] == 1


@pytest.mark.parametrize("argv", [
    ["inverse", "zoo:mix2", "--prior", "uniform:2", "--horizon", "10", "--output", "01"],
    ["detlimit", "zoo:coin1", "--prior", "faircoin:set=0+1", "--horizon", "4", "--output", "0"],
    ["joint", "zoo:copy1", "--prior", "faircoin:set=0+01", "--horizon", "3"],
])
def test_domain_errors_exit_2(argv):
    code, _, err = run(*argv)
    assert code == 2 and err.startswith("error: ")


def test_check_passes():
    code, out, _ = run("check", "zoo:mix2", "--prior", "uniform:2", "--horizon", "10")
    assert code == 0
    assert out.rstrip().splitlines()[-2].endswith(", 0 failed")


def test_check_failure_exit_3(monkeypatch):
    monkeypatch.setattr(cli.selftest, "run_check", lambda *a, **k: [CheckResult("x", "FAIL", "boom")])
    code, out, _ = run("check", "zoo:copy1", "--prior", "faircoin:set=0+1", "--horizon", "3")
    assert code == 3 and "FAIL x" in out


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_check_thread_independent(fmt):
    base = ["check", "zoo:alt", "--prior", "faircoin:set=0+1", "--horizon", "10", "--format", fmt]
    assert run(*base, "--threads", "1") == run(*base, "--threads", "8")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sptm", "zoo"], capture_output=True, text=True)
    assert proc.returncode == 0 and "mix2" in proc.stdout

import json
import os
import subprocess
import sys

import pytest

from gmcocycle import cli
from gmcocycle.suite import PRECISION_ENV

S = "[[0,-1],[1,0]]"


def _run(*argv):
    code, text, diag = cli.run(list(argv))
    return code, text, diag


def test_classify_and_realize():
    code, text, diag = _run("classify", "--rays", "[[1,0],[0,1],[1,1]]")
    assert code == 0 and not diag and text.startswith("DependentAcyclic")
    code, text, _ = _run("realize", "--vertices", "[[1,0],[0,1]]", "--json")
    assert code == 0 and json.loads(text)["element"]["n"] == 2


def test_theta_and_defect():
    code, text, _ = _run("theta", "--gammas", f"[{S}]", "--json")
    assert code == 0 and json.loads(text)["columns"] == [[0, 1], [1, 0]]
    code, text, _ = _run("defect", "--gammas", "[[[-1,0],[-1,1]],[[1,0],[2,1]]]", "--json")
    assert code == 0 and json.loads(text)["defect"] == 1
    code, text, diag = _run("defect", "--gammas", f"[{S},{S}]")
    err = json.loads(text)
    assert code == 2 and diag and err["error"] == "ExtensionDependent" and err["where"] == "merge 1,2"
    code, text, _ = _run("theta", "--gammas", f"[{S}]", "--mode", "sym")
    assert code == 2 and json.loads(text)["error"] == "EvenDimension"


def test_hecke_and_sullivan():
    code, text, _ = _run("hecke", "--n", "2", "--i", "1", "--p", "2")
    assert code == 0 and "identity 3" in text
    code, text, _ = _run("hecke", "--n", "2", "--i", "1", "--p", "4")
    assert code == 2
    code, text, _ = _run("hecke", "--n", "6", "--i", "3", "--p", "7", "--budget", "100")
    assert code == 2 and json.loads(text)["error"] == "TooLarge"
    assert _run("sullivan", "--n", "2")[1].strip() == "12"
    code, text, _ = _run("sullivan", "--n", "3", "--exclude", "2,3,5,7,11,13,17,19,23,29,31,37,41,43,47")
    assert "not stabilized" in text


def test_dist_specialize_intersect():
    code, text, _ = _run("dist", "verify", "--n", "1", "--k", "2", "--a", "1/3")
    assert code == 0 and text.startswith("Equal")
    code, text, _ = _run("specialize", "--n", "1", "--x", "1/3", "--json")
    assert code == 0
    code, text, _ = _run("specialize", "--n", "1", "--x", "0")
    err = json.loads(text)
    assert code == 2 and err["error"] == "BadHyperplane" and err["slot"] == 0
    code, text, _ = _run("intersect", "--matrix", "[[1,1]]", "--json")
    assert code == 0 and json.loads(text)["status"] == "Certified"
    code, text, _ = _run("intersect", "--matrix", "[[1,0]]")
    assert code == 2 and json.loads(text)["error"] == "MinorZero"


@pytest.mark.parametrize("argv", [
    ["classify"],
    ["classify", "--rays", "[[1,0],"],
    ["theta", "--gammas", "[[1,2]]"],
    ["hecke", "--n", "x", "--i", "1", "--p", "2"],
    ["nonsense"],
    [],
])
def test_malformed_input_exit_two(argv):
    code, text, diag = cli.run(argv)
    assert code == 2 and diag
    assert "error" in json.loads(text)


def test_file_input_and_output(tmp_path):
    f = tmp_path / "rays.json"
    f.write_text("[[1,0],[-1,0]]")
    out = tmp_path / "report.json"
    code, text, _ = _run("classify", "--rays", str(f), "--output", str(out))
    assert code == 0 and "DependentNonAcyclic" in text
    assert json.loads(out.read_text())["kind"] == "DependentNonAcyclic"


def test_suite_subset_deterministic():
    a = _run("suite", "--only", "sullivan_denominator,hecke_qbinomial", "--seed", "3", "--json")
    b = _run("suite", "--only", "sullivan_denominator,hecke_qbinomial", "--seed", "3", "--json")
    assert a == b and a[0] == 0
    rep = json.loads(a[1])
    assert {c["name"] for c in rep["checks"]} == {"sullivan_denominator", "hecke_qbinomial"}


def _main(args, env_extra):
    env = dict(os.environ, **env_extra)
    return subprocess.run([sys.executable, "-m", "gmcocycle.cli", *args], env=env,
                          capture_output=True, text=True)


def test_precision_env():
    r = _main(["dist", "verify", "--n", "1", "--k", "2", "--a", "1/3", "--json"], {PRECISION_ENV: "128"})
    assert r.returncode == 0
    assert json.loads(r.stdout)["report"]["plan"]["precision_bits"] == 128
    r = _main(["sullivan", "--n", "2"], {PRECISION_ENV: "abc"})
    assert r.returncode == 2 and json.loads(r.stderr)["error"]

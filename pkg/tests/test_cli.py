import json
import subprocess
import sys

import pytest

from artifact import cli
from artifact.report import compare


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tables_khare(capsys):
    code, out, _ = run(capsys, "tables", "khare", "--r", "2", "--s", "0")
    assert code == 0
    assert out.strip() == "khare (irreducible, sub-case i-a, p=5, r=2, s=0): {xi^4, xi^8, xi^16, xi^20}"


def test_tables_bdj(capsys):
    code, out, _ = run(capsys, "tables", "bdj", "--case", "nonsplit", "--r", "0", "--s", "1", "--ratio-equal", "--tres-ramifie")
    assert code == 0
    assert "sub-case ii-b" in out and "sigma_{4,2}" in out


def test_tables_ab_choice(capsys):
    code, out, _ = run(capsys, "tables", "ab-choice", "--r", "2", "--s", "0", "--chi-row", "1")
    assert code == 0
    assert out.strip() == "row 1: chi = xi^4  ->  (a, b) = (2, 0)"


def test_tables_json_stdout(capsys):
    code, out, _ = run(capsys, "tables", "khare", "--r", "2", "--s", "0", "--json", "-")
    doc = json.loads(out)
    assert code == 0
    assert doc["version"] == cli.REPORT_VERSION
    assert doc["checks"] == {"subcase": "i-a", "weights": [4, 8, 16, 20]}


@pytest.mark.parametrize(
    "argv",
    [
        ["tables", "khare", "--r", "2"],
        ["tables", "khare", "--r", "9", "--s", "0"],
        ["verify", "--suite", "nope"],
        ["verify", "--suite", "diamond", "--p", "3"],
        ["verify", "--suite", "wchi3", "--f", "2"],
        ["verify", "--suite", "pbw", "--level", "1"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_bad_environment_exit_2(capsys, monkeypatch):
    monkeypatch.setenv("ARTIFACT_PRECISION", "lots")
    code, _, err = run(capsys, "verify", "--suite", "ext1")
    assert code == 2 and "ARTIFACT_PRECISION" in err


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "ext1", "--chi-exp", "4")
    assert code == 0
    assert out.strip().splitlines()[-1] == "ext1: 24/24 checks pass"


def _failing(p):
    return [compare("demo/fail", {"p": p}, 1, 2), compare("demo/pass", {"p": p}, 1, 1)]


def test_verify_failure_exit_1(capsys, monkeypatch):
    monkeypatch.setattr(cli, "instances", lambda suite, params: [(_failing, (params.p,))])
    code, out, _ = run(capsys, "verify", "--suite", "pbw")
    assert code == 1
    assert "FAIL  demo/fail" in out
    assert "1/2 checks pass" in out


def test_json_report_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        assert cli.main(["verify", "--suite", "diamond", "--a", "2", "--json", str(path), "--quiet"]) == 0
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()
    doc = json.loads(paths[0].read_text())
    assert set(doc) == {"version", "params", "checks"}
    assert doc["params"]["suite"] == "diamond"
    for check in doc["checks"]:
        assert {"id", "params", "status", "expected", "computed"} <= set(check)
        assert "wall_time" not in check
    assert [c["id"] for c in doc["checks"]] == sorted(c["id"] for c in doc["checks"])


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "artifact", "--version"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("artifact ")

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from artifact.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_weyl_length(capsys):
    assert run(capsys, "weyl", "length", "--nu", "0,1,2", "--w", "id") == (0, "4\n", "")


def test_weyl_length_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "weyl", "length", "--nu", "-1,0,1", "--w", "id", "--alcove", "appendix")
    assert code == 0 and json.loads(out)["length"] == 4


def test_weyl_word_and_codim1(capsys):
    code, out, _ = run(capsys, "weyl", "word", "--nu", "1,0,-1", "--w", "w0")
    assert code == 0 and out.strip()
    code, out, _ = run(capsys, "weyl", "codim1", "--nu", "1,0,-1", "--w", "w0", "--format", "json")
    assert code == 0 and all(len(x["deletions"]) >= 1 for x in json.loads(out))


def test_weyl_mult_bruhat(capsys):
    assert run(capsys, "weyl", "mult", "--x", "1,0,-1/w0", "--y", "0,0,0/w0")[1] == "t(1,0,-1)*[1,2,3]\n"
    assert run(capsys, "weyl", "bruhat", "--x", "0,0,0/id", "--y", "1,0,-1/w0")[1] == "true\n"


def test_bounds_oracle(capsys):
    code, out, _ = run(capsys, "bounds", "iwahori", "--nu", "-1,0,1", "--w", "id", "--oracle")
    assert code == 0 and "oracle agrees: True" in out


def test_chart_monodromy(capsys):
    code, out, _ = run(capsys, "chart", "monodromy", "--mu", "22,7,-8", "--p", "23", "--no-solve")
    assert code == 0
    assert out.count("relation:") == 1


def test_chart_build_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "chart", "build", "--mu", "22,7,-8", "--p", "23")
    assert code == 0 and json.loads(out)["kind"] == "A"


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--mu", "22,7,-8", "--p", "23", "--oracle")
    assert code == 0 and out.startswith("F[c1^{±1}, c2^{±1}, c3^{±1}]")
    code, out, _ = run(capsys, "invariants", "--chart", "B", "--k", "1", "--n", "3", "--f", "1")
    assert out.strip() == "F[a, (d1 d2)^{±1}, d3^{±1}]"


def test_extend_exponent_auto(capsys):
    code, out, _ = run(capsys, "--format", "json", "extend", "exponent", "--word", "1,0", "--i", "1", "--beta", "1,0", "--convention", "auto")
    doc = json.loads(out)
    assert code == 0 and doc["pinned"] == "linear" and doc["exponent"] == doc["oracle"]


def test_extend_minors_and_walk(capsys):
    assert run(capsys, "extend", "minors", "--nu", "0,1,2", "--w", "id")[0] == 0
    assert run(capsys, "extend", "minors", "--nu", "1,0,-1", "--w", "id")[0] == 1
    code, out, _ = run(capsys, "extend", "walk", "--word", "1,2,1,0", "--n", "3")
    assert code == 0 and len(out.splitlines()) == 5


def test_verify_toy_golden(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "--n", "3", "--f", "1", "--p", "23", "--mu", "22,7,-8", "--format", "json", "--out", str(out))
    assert code == 0
    assert out.read_text() == (GOLDEN / "verify_toy.json").read_text()


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--f", "1", "--p", "23", "--mu", "22,7,-8")
    assert code == 0 and "final ring: F[x1, x2, x3^{±1}]" in out


def test_verify_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 3, "f": 2, "p": 31, "mu": [[27, 12, -10], [4, -3, -10]]}))
    code, out, _ = run(capsys, "--format", "json", "verify", "--config", str(cfg))
    assert code == 0 and out == (GOLDEN / "verify_n3f2.json").read_text()


def test_verify_hypotheses(capsys):
    code, out, _ = run(capsys, "verify", "--p", "23", "--mu", "22,7,-8", "--field", "fp:23")
    assert code == 3 and "hypotheses not met" in out


def test_verify_failure_exit(capsys):
    assert run(capsys, "verify", "--p", "23", "--mu", "22,7,-8", "--convention", "affine")[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["weyl"],
        ["frob"],
        ["weyl", "length", "--nu", "a,b"],
        ["weyl", "length", "--nu", "0,1", "--w", "3,2,1"],
        ["weyl", "mult", "--x", "0,0", "--y", "0,0/id"],
        ["verify", "--mu", "1,2", "--p", "23"],
        ["verify", "--mu", "22,7,-8"],
        ["verify", "--config", "/nonexistent.json"],
        ["verify", "--p", "23", "--mu", "22,7,-8", "--field", "fp:oops"],
        ["extend", "exponent", "--word", "1,1", "--i", "1", "--beta", "1,0,0"],
        ["extend", "exponent", "--word", "5", "--i", "1", "--beta", "1,0"],
        ["invariants", "--chart", "B"],
        ["--format", "xml", "weyl", "length", "--nu", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and "error" in err and "Traceback" not in err


def test_console_script_module():
    proc = subprocess.run(
        [sys.executable, "-m", "artifact.cli", "weyl", "length", "--nu", "0,1,2", "--w", "id"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "4\n"

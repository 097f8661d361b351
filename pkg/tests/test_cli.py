import json
import math

import pytest

from sepsim import __version__
from sepsim.cli import dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--quiet")
    return code, json.loads(out)


@pytest.fixture
def bell_file(tmp_path):
    path = tmp_path / "bell.txt"
    r = 1 / math.sqrt(2)
    path.write_text(f"2\n{r} 0\n0 0\n0 0\n{r} 0\n")
    return path


def test_dj_run_linear(capsys):
    code, doc = run_json(capsys, "dj", "run", "--n", "3", "--linear", "c=0,a=101")
    assert code == 0
    assert doc["version"] == __version__
    assert doc["config"]["seed"] == 0
    assert doc["config"]["oracle"] == {"linear": "c=0,a=101"}
    assert doc["result"]["verdict"] == "balanced"
    assert doc["result"]["queries_used"] == 1
    assert [s["verdict"] for s in doc["result"]["trace"]] == ["separable"] * 4


def test_dj_trace_has_factors(capsys):
    code, doc = run_json(capsys, "dj", "trace", "--n", "2", "--table", "0110")
    assert code == 0
    psi2 = doc["result"]["trace"][2]
    assert psi2["step"] == "psi2" and len(psi2["factors"]) == 3


def test_dj_trace_entangled_witness(capsys):
    code, doc = run_json(capsys, "dj", "trace", "--n", "3", "--table", "00010111")
    assert code == 0
    assert doc["result"]["trace"][2]["verdict"] == "entangled"
    assert set(doc["result"]["trace"][2]["witness"]) >= {"qubit", "i", "j", "minor"}


def test_dj_from_file(capsys, tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("n=2\n0011\n")
    code, doc = run_json(capsys, "dj", "run", "--n", "2", "--file", str(path))
    assert code == 0 and doc["result"]["verdict"] == "balanced"


def test_verify_prop3(capsys):
    code, doc = run_json(capsys, "verify", "prop3", "--n", "4", "--jobs", "1")
    assert code == 0
    assert doc["result"]["population"] == 12872
    assert doc["result"]["stats"]["separable"] == 32


def test_check_sep_bell(capsys, bell_file):
    code, doc = run_json(capsys, "check-sep", "--state-file", str(bell_file))
    assert code == 0
    assert doc["result"]["verdict"] == "entangled"
    assert abs(doc["result"]["witness"]["minor"] - 0.5) <= 1e-12


def test_simon_run(capsys):
    code, doc = run_json(capsys, "simon", "run", "--n", "3", "--a", "101", "--seed", "4")
    assert code == 0
    assert doc["result"]["recovered_a"] == "101"
    assert doc["config"]["max_rounds"] == 60


def test_simon_exhausted_rounds_exit_1(capsys):
    code, doc = run_json(capsys, "simon", "run", "--n", "3", "--a", "101", "--max-rounds", "0")
    assert code == 1 and doc["result"]["success"] is False


def test_grover_commands(capsys):
    code, doc = run_json(capsys, "grover", "run", "--n", "2", "--marked", "2", "--iterations", "1")
    assert code == 0 and doc["result"]["measured"] == 2
    code, doc = run_json(capsys, "grover", "first-step", "--n", "2", "--marked", "3")
    assert code == 0
    assert doc["result"]["separability"]["verdict"] == "entangled"
    assert doc["result"]["two_qubit_constraint"]["residual"] == pytest.approx(0.5, abs=1e-12)
    code, doc = run_json(capsys, "grover", "first-step", "--n", "2", "--marked", "")
    assert code == 0 and doc["result"]["separability"]["verdict"] == "separable"


def test_classical(capsys):
    code, doc = run_json(capsys, "classical", "dj-exact", "--n", "3", "--table", "00000000")
    assert code == 0 and doc["result"]["queries"]["count"] == 5
    code, doc = run_json(capsys, "classical", "dj-linear", "--n", "3", "--linear", "c=0,a=101")
    assert code == 0
    assert doc["result"]["function"] == {"c": 0, "a": "101"}
    assert doc["result"]["queries"]["count"] == doc["result"]["oracle_query_counter_delta"] == 4


def test_enumerate(capsys):
    code, doc = run_json(capsys, "enumerate", "promise", "--n", "3")
    assert code == 0 and doc["result"]["count"] == 72
    code, out, _ = run(capsys, "enumerate", "linear", "--n", "2", "--format", "tsv")
    lines = out.strip().splitlines()
    assert lines[0] == "c\ta\ttable" and len(lines) == 9


def test_tsv_verify_summary(capsys):
    code, out, _ = run(capsys, "verify", "prop1", "--n", "3", "--format", "tsv", "--quiet")
    header, row = out.strip().splitlines()
    assert header.split("\t")[:4] == ["proposition", "n", "population", "passed"]
    assert row.split("\t")[:4] == ["prop1", "3", "16", "16"]


def test_out_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "verify", "simon", "--n", "2", "--out", str(out), "--quiet")
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["result"]["verified"]


def test_byte_identical_reports(capsys):
    argv = ["verify", "prop5", "--n", "3", "--seed", "7", "--quiet"]
    _, a, _ = run(capsys, *argv, "--jobs", "1")
    _, b, _ = run(capsys, *argv, "--jobs", "2")
    assert a == b
    _, c, _ = run(capsys, "simon", "run", "--n", "3", "--a", "110", "--seed", "9")
    _, d, _ = run(capsys, "simon", "run", "--n", "3", "--a", "110", "--seed", "9")
    assert c == d


@pytest.mark.parametrize(
    "argv",
    [
        ["dj", "run", "--n", "2", "--table", "011"],
        ["dj", "run", "--n", "2", "--table", "01x0"],
        ["dj", "run", "--n", "3", "--table", "0110"],
        ["dj", "run", "--n", "2", "--table", "0111"],
        ["dj", "run", "--n", "2", "--file", "/nonexistent/f.txt"],
        ["dj", "run", "--n", "2"],
        ["dj", "run", "--n", "2", "--table", "0110", "--linear", "c=0,a=11"],
        ["check-sep", "--state-file", "/nonexistent/s.txt"],
        ["verify", "prop3", "--n", "5"],
        ["verify", "prop9", "--n", "2"],
        ["simon", "run", "--n", "3", "--a", "000"],
        ["grover", "run", "--n", "2", "--marked", ""],
        ["grover", "run", "--n", "2", "--marked", "7"],
        ["dj", "run", "--n", "0", "--table", "01"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_unnormalized_state_file_is_usage_error(capsys, tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("1\n1 0\n1 0\n")
    code, _, err = run(capsys, "check-sep", "--state-file", str(path))
    assert code == 2 and "norm" in err

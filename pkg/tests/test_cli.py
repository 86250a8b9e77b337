import json
import subprocess
import sys

import pytest

from qloop.cli import DEFAULT_SUITE, UsageError, execute, main, validate_job


def run(tmp_path, capsys, job, *args):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    code = main(["--spec", str(path), *args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_drinfeld_poly(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"command": "drinfeld-poly", "diagram": "A2", "node": 2, "alpha": "3/1"})
    assert code == 0
    data = json.loads(out)
    assert data["drinfeld_polynomials"]["2"]["polynomial"] == "z - 3/2"
    assert data["drinfeld_polynomials"]["1"]["polynomial"] == "1"


def test_output_is_deterministic(tmp_path, capsys):
    job = {"command": "rmatrix", "factors": [{"node": 1, "alpha": "3/1"}, {"node": 1}]}
    first = run(tmp_path, capsys, job)
    second = run(tmp_path, capsys, job)
    assert first == second and first[0] == 0


def test_build_and_tensor(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"command": "build", "diagram": {"type": "A", "rank": 2}, "node": 1})
    assert code == 0 and json.loads(out)["dimension"] == 3
    code, out, _ = run(tmp_path, capsys, {"command": "tensor", "factors": [{"node": 1}, {"node": 1, "tau": 2}], "coproduct": "bullet"})
    assert code == 0 and json.loads(out)["dimension"] == 4


def test_verify_relations_command(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"command": "verify-relations", "diagram": "A2", "node": 1, "mode_bound": 1})
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["results"] == []
    code, out, _ = run(tmp_path, capsys, {"command": "verify-relations", "node": 1, "full": True}, "--mode-bound", "1")
    assert code == 0 and json.loads(out)["mode_bound"] == 1 and json.loads(out)["results"]


def test_cyclic_and_cocyclic(tmp_path, capsys):
    crit = [{"node": 1, "tau": 0}, {"node": 1, "tau": 2}]
    code, out, _ = run(tmp_path, capsys, {"command": "cyclic", "factors": crit})
    assert code == 0
    assert json.loads(out) == {"command": "cyclic", "cyclic": False, "submodule_dim": 3, "witness_basis_size": 3, "dimension": 4}
    code, out, _ = run(tmp_path, capsys, {"command": "cocyclic", "factors": crit})
    assert json.loads(out)["cocyclic"] is True


def test_ybe_command(tmp_path, capsys):
    job = {"command": "ybe", "factors": [{"node": 1, "alpha": "1/1"}, {"node": 1, "alpha": "3/1"}, {"node": 1, "alpha": "9/1"}]}
    code, out, _ = run(tmp_path, capsys, job)
    assert code == 0 and json.loads(out)["ybe"] is True


def test_rmatrix_arity(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, {"command": "rmatrix", "node": 1})
    assert code == 2 and "two factors" in err


def test_standard_suite_default(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"command": "standard-suite"})
    data = json.loads(out)
    assert code == 0
    assert data["failed"] == 0
    assert data["checked"] == len(DEFAULT_SUITE["diagrams"]) * len(DEFAULT_SUITE["patterns"])
    assert data["orientation"] == {"2/1": "descending"}


def test_standard_suite_parallel_matches_serial(tmp_path, capsys):
    job = {"command": "standard-suite", "diagrams": ["A1"], "zetas": ["2/1", "3/2"]}
    serial = run(tmp_path, capsys, job)
    parallel = run(tmp_path, capsys, job, "--jobs", "2")
    assert serial == parallel


def test_empty_suite(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"command": "standard-suite", "patterns": []})
    assert code == 0 and json.loads(out)["checked"] == 0


def test_pretty_and_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(tmp_path, capsys, {"command": "drinfeld-poly", "node": 1}, "--pretty", "--out", str(target))
    assert code == 0 and out == ""
    text = target.read_text()
    assert text.startswith("{\n  ") and json.loads(text)["command"] == "drinfeld-poly"


def test_command_argument(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, {"node": 1}, "drinfeld-poly")
    assert code == 0 and json.loads(out)["command"] == "drinfeld-poly"
    code, _, err = run(tmp_path, capsys, {"command": "build", "node": 1}, "cyclic")
    assert code == 2 and "conflicts" in err


@pytest.mark.parametrize(
    "job,fragment",
    [
        ({"command": "build", "node": 1, "bogus": 1}, "$: unknown field(s) bogus"),
        ({"command": "tensor", "factors": [{"node": 1, "colour": "red"}]}, "$.factors[0]: unknown field(s) colour"),
        ({"command": "build", "node": 0}, "$.node"),
        ({"command": "nope"}, "$.command"),
        ({"node": 1}, "$.command: missing"),
        ({"command": "build", "node": 1, "alpha": "x"}, "$.alpha"),
        ({"command": "build", "node": 1, "alpha": "0/1"}, "nonzero"),
        ({"command": "build", "diagram": {"edges": [[1, 2], [2, 3], [3, 1]]}, "node": 1}, "positive definite"),
        ({"command": "build", "diagram": "B2", "node": 1}, "$.diagram"),
        ({"command": "build"}, "'node' or 'factors'"),
    ],
)
def test_usage_errors(tmp_path, capsys, job, fragment):
    code, out, err = run(tmp_path, capsys, job)
    assert code == 2 and out == ""
    assert fragment in err


def test_invalid_json_and_missing_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--spec", str(bad)]) == 2
    assert main(["--spec", str(tmp_path / "missing.json")]) == 2
    assert main(["--jobs", "0", "--spec", str(bad)]) == 2
    assert main(["--no-such-flag"]) == 2


def test_validate_job_accepts_integers():
    assert validate_job({"command": "build", "node": 1, "alpha": 3, "zeta": 2})["alpha"] == 3
    with pytest.raises(UsageError):
        validate_job({"command": "build", "mode_bound": -1})


def test_execute_returns_exit_code():
    report, code = execute({"command": "ybe", "factors": [{"node": 1}, {"node": 1, "alpha": "3/1"}, {"node": 1, "alpha": "9/1"}]})
    assert code == 0 and report["ybe"] is True


def test_module_entry_point_reads_stdin():
    job = json.dumps({"command": "drinfeld-poly", "node": 1, "alpha": "3/1"})
    proc = subprocess.run([sys.executable, "-m", "qloop"], input=job, capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["drinfeld_polynomials"]["1"]["polynomial"] == "z - 3/2"

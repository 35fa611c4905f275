"""Tests for the command-line interface."""

import csv
import io
import json

import pytest

from regsubmod import NumericBreakdownError, load_instance
from regsubmod import cli
from regsubmod.cli import EXIT_CAPABILITY, EXIT_OK, EXIT_PARSE, EXIT_USAGE, main

INSTANCE = {
    "n": 3,
    "f": {"type": "dicut", "edges": [[0, 1, 1.0], [1, 2, 0.5]]},
    "ell": [0.0, -0.2, 0.1],
    "constraint": {"type": "cardinality", "k": 2},
}


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "small.json"
    path.write_text(json.dumps(INSTANCE), encoding="utf-8")
    return path


def test_solve_brute(instance_file, capsys):
    """Test that solve prints one CSV row with the optimum."""
    assert main(["solve", "--instance", str(instance_file), "--algo", "brute"]) == EXIT_OK
    (row,) = _rows(capsys.readouterr().out)
    assert row["algorithm"] == "brute"
    assert row["mask"] == "5"
    assert row["elements"] == "0 2"
    assert float(row["total"]) == pytest.approx(1.1)
    assert row["f"] == "1.000000"


def test_solve_to_file(instance_file, tmp_path):
    """Test --out writes the same table to disk."""
    out = tmp_path / "out" / "solve.csv"
    assert main(["solve", "--instance", str(instance_file), "--algo", "trivial", "--out", str(out)]) == EXIT_OK
    (row,) = _rows(out.read_text(encoding="utf-8"))
    assert row["algorithm"] == "trivial"


def test_solve_rejects_constraint_for_double_greedy(instance_file, capsys):
    """Test that an unconstrained-only algorithm on a constrained instance is a usage error."""
    assert main(["solve", "--instance", str(instance_file), "--algo", "randomized-dg"]) == EXIT_USAGE
    assert "matroid constraint" in capsys.readouterr().err


def test_solve_parse_error(tmp_path, capsys):
    """Test that a broken instance file exits with the parse code and names the location."""
    path = tmp_path / "broken.json"
    path.write_text('{\n  "n": 2,\n  "f": nope\n}', encoding="utf-8")
    assert main(["solve", "--instance", str(path)]) == EXIT_PARSE
    assert "broken.json:3" in capsys.readouterr().err


def test_solve_capability_error(tmp_path):
    """Test that brute force past its size limit exits with the capability code."""
    path = tmp_path / "big.json"
    path.write_text(json.dumps({"n": 21, "f": {"type": "dicut", "edges": [[0, 1, 1.0]]}}), encoding="utf-8")
    assert main(["solve", "--instance", str(path), "--algo", "brute"]) == EXIT_CAPABILITY


def test_bad_arguments_exit_with_usage_code():
    """Test that argparse errors exit with code 1."""
    with pytest.raises(SystemExit) as exc_info:
        main(["solve"])
    assert exc_info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc_info:
        main(["solve", "--instance", "x.json", "--algo", "simulated-annealing"])
    assert exc_info.value.code == EXIT_USAGE


def test_table_row(capsys):
    """Test a single β row of the combined non-negative table."""
    assert main(["table", "--name", "nonneg-comb", "--beta", "0.9"]) == EXIT_OK
    (row,) = _rows(capsys.readouterr().out)
    assert row["table"] == "nonneg-comb"
    assert float(row["alpha"]) == pytest.approx(0.4493, abs=1e-3)


def test_table_infeasible_beta(capsys):
    """Test that an unreachable β is reported as a one-line usage error."""
    assert main(["table", "--name", "nonpos", "--beta", "-1"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert err.strip().splitlines()[-1].startswith("regsubmod: error:")
    assert "Traceback" not in err


def test_other_library_errors_exit_with_usage_code(monkeypatch, capsys):
    """Test that any remaining library error is reported without a traceback."""

    def breakdown(args):
        raise NumericBreakdownError("LP solver returned status 4")

    monkeypatch.setattr(cli, "cmd_table", breakdown)
    assert main(["table", "--name", "nonpos", "--beta", "1.0"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert err.strip().splitlines()[-1] == "regsubmod: error: NumericBreakdownError: LP solver returned status 4"


def test_sgap_limits(capsys):
    """Test the fixed-construction limit checks."""
    assert main(["sgap", "--limit", "0478"]) == EXIT_OK
    (row,) = _rows(capsys.readouterr().out)
    assert row["holds"] == "true"

    assert main(["sgap", "--limit", "csm-beta1", "--k", "2,3"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert [r["gap"] for r in rows] == ["false", "true"]


def test_verify_limits(capsys):
    """Test that the limits suite passes end to end."""
    assert main(["verify", "--suite", "limits"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert rows and all(r["passed"] == "true" for r in rows)


def test_verify_unknown_suite():
    """Test that an unknown suite is a usage error."""
    assert main(["verify", "--suite", "nonsense"]) == EXIT_USAGE


def test_gen_writes_instances(tmp_path, capsys):
    """Test gen for single- and two-instance families."""
    out = tmp_path / "dicut.json"
    assert main(["gen", "--family", "random-dicut", "--params", "n=5,seed=2", "--out", str(out)]) == EXIT_OK
    assert load_instance(out).n == 5
    capsys.readouterr()

    out = tmp_path / "ob.json"
    assert main(["gen", "--family", "online-bad", "--params", "alpha=0.5", "--out", str(out)]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert [r["path"] for r in rows] == [str(tmp_path / "ob_1.json"), str(tmp_path / "ob_2.json")]
    assert load_instance(tmp_path / "ob_2.json").ell.weights[1] == -1.0


def test_gen_bad_params():
    """Test that an unknown parameter is a usage error."""
    assert main(["gen", "--family", "random-cut", "--params", "k=3"]) == EXIT_USAGE

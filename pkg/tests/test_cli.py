import json
import math
from importlib import resources

import jsonschema
import pytest

from maxentstate.cli import main

SCHEMA = json.loads(resources.files("maxentstate").joinpath("schema/envelope.schema.json").read_text())
THREE_LAM = math.log((-1 + math.sqrt(13)) / 6)


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


class TestSolve:
    def test_die(self, capsys):
        code, doc = run_json(capsys, "solve", "--obs", "1,2,3,4,5,6", "--mean", "3.5")
        assert code == 0
        assert doc["result"]["lambda"] == 0.0
        assert max(abs(p - 1 / 6) for p in doc["result"]["state"]) <= 1e-10

    def test_no_solution(self, capsys):
        code, out, err = run(capsys, "solve", "--obs", "0,1", "--mean", "2")
        assert code == 2
        assert "outside" in err

    def test_three_outcomes(self, capsys):
        code, doc = run_json(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5")
        assert code == 0
        assert doc["result"]["lambda"] == pytest.approx(THREE_LAM, abs=1e-10)
        assert doc["schema_version"] == "1.0" and doc["command"] == "solve"

    def test_boundary_json(self, capsys):
        code, doc = run_json(capsys, "solve", "--obs", "1,2,3", "--mean", "3")
        assert code == 0 and doc["result"]["lambda"] == "inf"
        assert doc["result"]["state"] == [0.0, 0.0, 1.0]

    @pytest.mark.parametrize("method", ["fixed-point", "bisection", "newton"])
    def test_methods(self, capsys, method):
        code, doc = run_json(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5", "--method", method)
        assert code == 0
        assert doc["result"]["lambda"] == pytest.approx(THREE_LAM, abs=1e-10)

    def test_trace_csv(self, capsys):
        code, out, _ = run(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5", "--trace", "--format", "csv")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "step,lambda,residual"
        assert lines[1] == "0,0,0.5" and lines[2].startswith("1,-0.125,")

    def test_trace_json(self, capsys):
        code, doc = run_json(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5", "--trace")
        trace = doc["diagnostics"]["trace"]
        assert trace[0] == {"k": 0, "lambda": 0.0, "residual": 0.5}
        assert len(trace) == doc["result"]["iterations"] + 1

    def test_non_convergence(self, capsys):
        code, doc = run_json(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5", "--max-iter", "3")
        assert code == 3 and doc["result"]["converged"] is False

    def test_csv_summary_row_has_17_digits(self, capsys):
        code, out, _ = run(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5", "--format", "csv")
        header, row = out.splitlines()
        assert header == "lambda,iterations,residual,termination,p1,p2,p3"
        lam = row.split(",")[0]
        assert float(lam) == pytest.approx(THREE_LAM, abs=1e-10)
        assert len(lam.lstrip("-").replace(".", "").lstrip("0")) == 17

    @pytest.mark.parametrize(
        "argv, flag",
        [
            (["solve", "--obs", "0,2,1", "--mean", "1"], "--obs"),
            (["solve", "--obs", "0,x", "--mean", "1"], "--obs"),
            (["solve", "--obs", "0,1", "--mean", "abc"], "--mean"),
            (["solve", "--obs", "0,1", "--mean", "0.5", "--tol", "-1"], "--tol"),
        ],
    )
    def test_usage_errors_name_the_flag(self, capsys, argv, flag):
        code, _, err = run(capsys, *argv)
        assert code == 1 and flag in err

    def test_env_default_tol(self, capsys, monkeypatch):
        monkeypatch.setenv("MAXENT_DEFAULT_TOL", "1e-4")
        _, doc = run_json(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5")
        assert doc["inputs"]["tol"] == 1e-4
        _, doc = run_json(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5", "--tol", "1e-9")
        assert doc["inputs"]["tol"] == 1e-9
        monkeypatch.setenv("MAXENT_DEFAULT_TOL", "nope")
        code, _, err = run(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5")
        assert code == 1 and "MAXENT_DEFAULT_TOL" in err

    def test_timing_only_on_request(self, capsys):
        _, doc = run_json(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5")
        assert "elapsed_s" not in doc["diagnostics"]
        _, doc = run_json(capsys, "solve", "--obs", "0,1,2", "--mean", "0.5", "--timing")
        assert doc["diagnostics"]["elapsed_s"] >= 0


class TestEquilibrium:
    def test_three_level(self, capsys):
        code, doc = run_json(capsys, "equilibrium", "--obs", "0,1,2")
        assert code == 0
        z = 1 + math.exp(-1) + math.exp(-2)
        assert doc["result"]["state"] == pytest.approx([1 / z, math.exp(-1) / z, math.exp(-2) / z], abs=1e-15)
        assert doc["result"]["functional_value"] == pytest.approx(-doc["result"]["log_partition"], abs=1e-10)

    def test_single_value_rejected(self, capsys):
        code, _, err = run(capsys, "equilibrium", "--obs", "1")
        assert code == 1 and "--obs" in err

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "equilibrium", "--obs", "0,1", "--format", "csv")
        assert out.splitlines()[0] == "log_partition,functional_value,p1,p2"


class TestOrder:
    def test_bottom_related(self, capsys):
        code, doc = run_json(capsys, "order", "--x", "0.25,0.25,0.25,0.25", "--y", "0.1,0.2,0.3,0.4")
        assert code == 0 and doc["result"]["related"] is True
        assert doc["result"]["witness_permutation"] == [4, 3, 2, 1]

    def test_two_outcomes(self, capsys):
        code, _, _ = run(capsys, "order", "--x", "0.6,0.4", "--y", "0.8,0.2")
        assert code == 0

    def test_unrelated(self, capsys):
        code, doc = run_json(capsys, "order", "--x", "0.5,0.4,0.1", "--y", "0.4,0.5,0.1")
        assert code == 4 and doc["result"]["related"] is False

    def test_projective(self, capsys):
        code, doc = run_json(capsys, "order", "--x", "0.6,0.4", "--y", "0.8,0.2", "--method", "projective")
        assert code == 0 and doc["result"]["related"] is True

    def test_projective_size_limit(self, capsys):
        x = ",".join(["0.1"] * 4 + ["0.2"] * 3)
        code, _, err = run(capsys, "order", "--x", x, "--y", x, "--method", "projective")
        assert code == 1 and "n <= 6" in err

    def test_mismatch(self, capsys):
        code, _, _ = run(capsys, "order", "--x", "0.5,0.5", "--y", "0.2,0.3,0.5")
        assert code == 1

    def test_invalid_state(self, capsys):
        code, _, err = run(capsys, "order", "--x", "0.5,0.7", "--y", "0.2,0.8")
        assert code == 1 and "--x" in err


class TestPhiChain:
    def test_die_single_row(self, capsys):
        code, out, _ = run(capsys, "phi-chain", "--obs", "1,2,3,4,5,6", "--mean", "3.5", "--format", "csv")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "step,lambda,residual,p1,p2,p3,p4,p5,p6,status"
        assert len(lines) == 2 and lines[1].endswith(",converged")

    def test_lambda_column_follows_iteration(self, capsys):
        from maxentstate import MaxEntProblem, if_step

        code, doc = run_json(capsys, "phi-chain", "--obs", "0,1,2", "--mean", "0.5")
        assert code == 0 and doc["result"]["status"] == "converged"
        p = MaxEntProblem([0, 1, 2], 0.5)
        t = 0.0
        for row in doc["result"]["chain"][:50]:
            assert row["lambda"] == pytest.approx(t, abs=1e-12)
            t = if_step(p, t)
        assert doc["result"]["final_lambda"] == pytest.approx(THREE_LAM, abs=1e-8)

    def test_truncated(self, capsys):
        code, out, _ = run(capsys, "phi-chain", "--obs", "0,1,2", "--mean", "0.5", "--steps", "1", "--format", "csv")
        lines = out.splitlines()
        assert code == 3 and len(lines) == 3 and lines[-1].endswith(",truncated")

    def test_boundary_rejected(self, capsys):
        code, _, _ = run(capsys, "phi-chain", "--obs", "0,1,2", "--mean", "0")
        assert code == 1


class TestOracleCompare:
    def test_three_outcomes(self, capsys):
        code, doc = run_json(capsys, "oracle-compare", "--obs", "0,1,2", "--mean", "0.5", "--resolution", "400")
        r = doc["result"]
        assert code == 0 and r["max_norm_gap"] <= 5e-3
        assert r["entropy_gap"] >= -1e-9 and r["sample_entropy_gap"] >= -1e-9

    def test_two_outcomes_within_spacing(self, capsys):
        code, doc = run_json(capsys, "oracle-compare", "--obs", "0,1", "--mean", "0.37", "--resolution", "50")
        assert code == 0 and doc["result"]["max_norm_gap"] <= 1 / 50 + 1e-12

    def test_too_many_outcomes(self, capsys):
        code, _, err = run(capsys, "oracle-compare", "--obs", "0,1,2,3,4", "--mean", "2")
        assert code == 1 and "n <= 4" in err

    def test_gap_exit_code(self, capsys):
        # a coarse grid on a lopsided observable cannot meet the two-step bound
        code, doc = run_json(capsys, "oracle-compare", "--obs", "0,0.01,3", "--mean", "0.02", "--resolution", "10")
        assert code in (0, 5)
        assert doc["result"]["within_bounds"] is (code == 0)


def test_deterministic_output(capsys):
    argvs = [
        ["solve", "--obs", "0,1,2", "--mean", "0.5", "--trace", "--format", "json"],
        ["phi-chain", "--obs", "-1,0.5,3", "--mean", "1", "--format", "csv"],
        ["oracle-compare", "--obs", "0,1,2", "--mean", "0.8", "--seed", "5", "--format", "json"],
    ]
    for argv in argvs:
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-m", "maxentstate", "solve", "--obs", "1,2,3,4,5,6", "--mean", "3.5"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.startswith("lambda: 0")

import csv
import io
import json
import math
import subprocess
import sys

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from gausskit.cli import emit_curve_csv, main
from gausskit.funcspec import parse


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_stencil_example(capsys):
    code, out, _ = run_cli(capsys, "stencil", "--order", "2", "--nodes", "0,1,2")
    assert code == 0
    rep = json.loads(out)
    assert rep["method"] == "stencil"
    assert [c["coefficient"] for c in rep["coefficients"]] == ["1", "-2", "1"]


def test_stencil_complex_nodes(capsys):
    code, out, _ = run_cli(capsys, "stencil", "--order", "1", "--nodes", "1,-1,0+1i")
    assert code == 0
    assert len(json.loads(out)["coefficients"]) == 3


def test_fit_example_writes_curve(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code, out, _ = run_cli(capsys, "fit", "--f", "sin(x)*chi(-pi,pi)", "--N", "20", "--t", "0.01",
                           "--csv", str(path))
    assert code == 0
    rep = json.loads(out)
    assert rep["method"] == "gauss-thm3"
    assert rep["parameters"]["N"] == 20 and rep["parameters"]["t"] == 0.01
    assert len(rep["coefficients"]) == 21
    rows = list(csv.reader(path.read_text().splitlines()))
    assert rows[0] == ["x", "f", "approx", "diff"]
    assert len(rows) - 1 == rep["parameters"]["samples"]
    # the sampled curve tracks the target away from the jumps
    mid = [r for r in rows[1:] if abs(float(r[0]) - 1.5) < 0.2]
    assert all(abs(float(r[3])) < 0.3 for r in mid)


def test_lsq_example(capsys):
    code, out, _ = run_cli(capsys, "lsq", "--f", "(x-1)^2*chi(-1,2)", "--N", "5", "--t", "0.01", "--digits", "50")
    assert code == 0
    rep = json.loads(out)
    assert rep["method"] == "gauss-lsq"
    assert rep["condition_estimate"] > 1e15
    assert rep["e2_error"] == pytest.approx(rep["error_l2"] ** 2, rel=1e-6)
    assert rep["parameters"]["precision_digits"] == 50


def test_emit_curve_csv_examples(tmp_path):
    zero = parse("0")
    p = tmp_path / "z.csv"
    emit_curve_csv(zero, zero, (0.0, 1.0), 2, p)
    assert p.read_bytes() == b"x,f,approx,diff\n0,0,0,0\n1,0,0,0\n"
    g = parse("exp(-x^2)*cos(3*x)")
    p2 = tmp_path / "same.csv"
    emit_curve_csv(g, g, (-2.0, 3.0), 50, p2)
    rows = list(csv.reader(p2.read_text().splitlines()))[1:]
    assert len(rows) == 50 and all(abs(float(r[3])) < 1e-12 for r in rows)
    xs = [float(r[0]) for r in rows]
    steps = [b - a for a, b in zip(xs, xs[1:])]
    assert max(steps) - min(steps) < 1e-12


def test_emit_curve_csv_stdout_and_errors(tmp_path, capsys):
    zero = parse("0")
    emit_curve_csv(zero, zero, (0.0, 1.0), 3, "-")
    assert capsys.readouterr().out.startswith("x,f,approx,diff\n")
    with pytest.raises(OSError):
        emit_curve_csv(zero, zero, (0.0, 1.0), 3, tmp_path / "missing" / "x.csv")


def test_curve_of_far_fit_is_regenerable(tmp_path):
    args = ["fit", "--f", "(x-1)^2*chi(-1,2)", "--N", "40", "--t", "0.01", "--range=-2:3", "--samples", "500"]
    outs = []
    for i in range(2):
        path = tmp_path / f"c{i}.csv"
        assert main(args + ["--csv", str(path), "--report", str(tmp_path / f"r{i}.json")]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    rows = list(csv.reader(io.StringIO(outs[0].decode())))[1:]
    assert len(rows) == 500
    assert all(math.isfinite(float(r[3])) for r in rows)


def test_determinism_across_processes(tmp_path):
    args = ["trig", "--f", "exp(-x^2)", "--N", "4", "--t", "0.2", "--samples", "21"]
    outs = []
    for i in range(2):
        csv_path, rep_path = tmp_path / f"c{i}.csv", tmp_path / f"r{i}.json"
        subprocess.run([sys.executable, "-m", "gausskit", *args, "--csv", str(csv_path), "--report", str(rep_path)],
                       check=True, cwd=tmp_path)
        outs.append((csv_path.read_bytes(), rep_path.read_bytes()))
    assert outs[0] == outs[1]


def test_parameter_echo(capsys):
    _, out, _ = run_cli(capsys, "fit", "--f", "exp(-x^2)", "--N", "3", "--t", "0.05")
    params = json.loads(out)["parameters"]
    assert {"f", "N", "t", "M", "digits", "abs_tol"} <= set(params)
    assert params["abs_tol"] == 1e-10 and params["digits"] >= 15


def test_env_default_digits(capsys, monkeypatch):
    monkeypatch.setenv("GAUSSKIT_DEFAULT_DIGITS", "77")
    _, out, _ = run_cli(capsys, "lsq", "--f", "exp(-x^2)", "--N", "2", "--t", "0.1")
    assert json.loads(out)["parameters"]["precision_digits"] == 77
    # translate fits size their own precision from the coefficient magnitudes
    _, out, _ = run_cli(capsys, "fit", "--f", "exp(-x^2)", "--N", "2", "--t", "0.1")
    assert json.loads(out)["parameters"]["digits"] != 77


def test_lsq_refuses_small_step_without_digits(capsys):
    code, _, err = run_cli(capsys, "lsq", "--f", "x*chi(0,1)", "--N", "7", "--t", "0.01")
    assert code == 1 and "--digits" in err


def test_numerical_failure_exit_code(capsys):
    code, _, err = run_cli(capsys, "lsq", "--f", "(x-1)^2*chi(-1,2)", "--N", "7", "--t", "0.01", "--digits", "15")
    assert code == 2 and "increase precision_digits" in err


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["fit", "--N", "3"], ["fit", "--f", "foo(x)", "--N", "3", "--t", "0.1"],
    ["fit", "--f", "x", "--N", "3", "--t", "0"], ["stencil", "--order", "3", "--nodes", "0,1"],
    ["fit", "--f", "exp(-x^2)", "--N", "-2", "--t", "0.1"], ["fit", "--f", "exp(-x^2)", "--N", "2", "--t", "0.1", "--wat"],
    ["trig", "--f", "exp(-x^2)", "--N", "5", "--t", "0.1", "--omega", "0.3"],
    ["fit", "--f", "exp(-x^2)", "--N", "2", "--t", "0.1", "--samples", "1", "--csv", "-"],
])
def test_usage_errors_exit_1(argv, capsys):
    code, out, err = run_cli(capsys, *argv)
    assert code == 1 and err.startswith("gausskit: error:")


def test_unwritable_report(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "fit", "--f", "exp(-x^2)", "--N", "2", "--t", "0.1",
                         "--report", str(tmp_path / "no" / "r.json"))
    assert code == 1


def test_other_subcommands(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "hermite", "--f", "sin(x)*chi(-pi,pi)", "--N", "10")
    assert code == 0 and json.loads(out)["error_l2_relative"] == pytest.approx(0.3555, abs=1e-3)
    code, out, _ = run_cli(capsys, "cosine", "--f", "1", "--interval", "0:1", "--N", "4", "--t", "0.2",
                           "--omega", "1.5", "--extension", "natural")
    assert code == 0 and json.loads(out)["error_l2"] < 1e-10
    code, out, _ = run_cli(capsys, "synth", "--f", "exp(-x^2)", "--N", "3", "--tau", "1.0")
    rep = json.loads(out)
    assert code == 0 and max(c["time"] for c in rep["coefficients"]) < rep["load_time"]
    code, out, _ = run_cli(capsys, "error", "--f", "exp(-x^2)", "--N", "3", "--t", "0.05", "--method", "hermite")
    rep = json.loads(out)
    assert code == 0 and "coefficients" not in rep and rep["error_l2"] < 1e-10
    code, out, _ = run_cli(capsys, "eval", "--f", "exp(-x^2)", "--N", "3", "--t", "0.05", "--samples", "11")
    assert code == 0 and out.splitlines()[0] == "x,f,approx,diff" and len(out.splitlines()) == 12
    code, out, _ = run_cli(capsys, "trig", "--f", "cos(0.2*x)", "--f-imag=-sin(0.2*x)", "--N", "5", "--t", "0.1",
                           "--method", "lsq")
    assert code == 0 and json.loads(out)["error_weighted"] < 1e-8


def test_timing_is_opt_in(capsys):
    _, out, _ = run_cli(capsys, "fit", "--f", "exp(-x^2)", "--N", "2", "--t", "0.1")
    assert "wall_time_ms" not in json.loads(out)
    _, out, _ = run_cli(capsys, "fit", "--f", "exp(-x^2)", "--N", "2", "--t", "0.1", "--timing")
    assert isinstance(json.loads(out)["wall_time_ms"], int)


TOKENS = ["fit", "hermite", "lsq", "trig", "cosine", "stencil", "synth", "eval", "error",
          "--f", "--N", "--t", "--M", "--digits", "--tau", "--omega", "--nodes", "--order", "--range",
          "--samples", "--abs-tol", "--interval", "--method", "--bogus",
          "gauss(0.1)", "x*chi(0,1)", "sin(", "0", "1", "2", "-1", "0.1", "-0.1", "abc", "0,1,2", "1:0", "0:1", "5", "lsq"]


@settings(max_examples=60, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.lists(st.sampled_from(TOKENS), max_size=9))
def test_fuzzed_argv_exit_codes(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:  # only --help style exits are allowed to escape
        code = exc.code
        assert code == 0
    capsys.readouterr()
    assert code in (0, 1, 2)

import json
import subprocess
import sys

import pytest

import jacsyz.report as report
from jacsyz.cli import main
from jacsyz.report import exponent_notation

CONICS = [f"x^2 + {2 ** j}*y^2 + {3 ** j}*z^2" for j in range(1, 5)]


def write(tmp_path, factors, characteristic=0, variables=("x", "y", "z"), name="in.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"variables": list(variables), "characteristic": characteristic, "factors": factors}))
    return str(path)


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_exponent_notation():
    assert exponent_notation((3, 3, 3)) == "(3)_3"
    assert exponent_notation((7, 7, 7, 8, 8, 8, 8)) == "(7)_3(8)_4"
    assert exponent_notation(()) == "()"


def test_exit_0_on_verified_input(tmp_path, capsys):
    code, rep = run_json(capsys, ["--input", write(tmp_path, ["x", "y", "z", "x^2+y^2+z^2"])])
    assert code == 0
    assert rep["computedExponents"] == [3, 3, 3]
    assert rep["case"] == "l>=3"
    assert rep["evidence"] == "exact over Q"
    assert all(c["pass"] for c in rep["checks"])
    assert {"case", "predictedExponents", "computedExponents", "bettiPredicted", "bettiComputed", "checks", "frame"} <= set(rep)
    assert rep["bettiComputed"]["M"][-1] == {"stage": 3, "twist": -9, "multiplicity": 1}


def test_exit_2_on_nodal_cubic(tmp_path, capsys):
    factors = ["x^3+y^3-3*x*y*z"] + [f"x^2+{2 ** (j - 1)}*y^2+{3 ** (j - 1)}*z^2" for j in range(2, 5)]
    code, rep = run_json(capsys, ["--input", write(tmp_path, factors), "--field", "p:32003"])
    assert code == 2
    assert rep["computedExponents"] == [7, 7, 7, 8, 8, 8, 8]
    assert rep["predictedExponents"] is None
    assert rep["evidence"] == "characteristic-p evidence"
    assert rep["genericity"]["smooth"][0]["pass"] is False


def test_exit_2_on_triple_point(tmp_path, capsys):
    code = main(["--input", write(tmp_path, ["x", "y", "x+y", "z"])])
    out = capsys.readouterr().out
    assert code == 2
    assert "triple point (0:0:1)" in out


def test_exit_3_on_prediction_mismatch(tmp_path, capsys, monkeypatch):
    real = report.predict

    def off_by_one(A, rep=None):
        p = real(A, rep)
        p.exponents = tuple(e + 1 for e in p.exponents)
        return p

    monkeypatch.setattr(report, "predict", off_by_one)
    code, rep = run_json(capsys, ["--input", write(tmp_path, ["x", "y", "z", "x^2+y^2+z^2"])])
    assert code == 3
    assert any(c["name"] == "exponents_match" and not c["pass"] for c in rep["checks"])


@pytest.mark.parametrize(
    "argv",
    [
        ["--input", "/nonexistent/file.json"],
        ["--field", "p:15", "--input", "x.json"],
        ["--mode", "bogus"],
        [],
    ],
)
def test_exit_1_usage_errors(argv, capsys):
    assert main(argv) == 1


def test_exit_1_on_bad_polynomial(tmp_path, capsys):
    assert main(["--input", write(tmp_path, ["x", "2y", "z", "x^2"])]) == 1
    assert "error" in capsys.readouterr().err


def test_exit_1_on_mode_variable_mismatch(tmp_path, capsys):
    three = write(tmp_path, ["x", "y", "z", "x^2+y^2+z^2"])
    four = write(tmp_path, ["x", "y", "z", "w", "x^2+y^2+z^2+w^2"], variables=("x", "y", "z", "w"), name="four.json")
    assert main(["--input", three, "--mode", "surface-experiment"]) == 1
    assert main(["--input", four]) == 1


def test_no_normalize_needs_coordinate_lines(tmp_path, capsys):
    path = write(tmp_path, ["x+z", "x^2+2*y^2+3*z^2", "x^2+4*y^2+9*z^2", "x^2+8*y^2+27*z^2"])
    assert main(["--input", path, "--no-normalize"]) == 1
    assert main(["--input", path]) == 0


def test_json_is_byte_stable(tmp_path):
    path = write(tmp_path, CONICS, characteristic=32003)
    cmd = [sys.executable, "-m", "jacsyz", "--input", path, "--json"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == 0
    assert a.stdout == b.stdout and a.stdout


def test_text_report_layout(tmp_path, capsys):
    assert main(["--input", write(tmp_path, CONICS, 32003)]) == 0
    out = capsys.readouterr().out
    assert "predicted exponents: (6)_3(7)_3" in out
    assert "characteristic-p evidence" in out
    assert "total:" in out
    assert "status: verified (exit 0)" in out


def test_exponents_only_mode(tmp_path, capsys):
    code, rep = run_json(capsys, ["--input", write(tmp_path, CONICS, 32003), "--mode", "exponents-only"])
    assert code == 0
    assert rep["computedExponents"] == [6, 6, 6, 7, 7, 7]
    assert rep["bettiComputed"] is None


def test_linear_algebra_oracle_mode(tmp_path, capsys):
    code, rep = run_json(capsys, ["--input", write(tmp_path, CONICS, 32003), "--oracle", "linear-algebra"])
    assert code == 0
    assert rep["computedExponents"] == [6, 6, 6, 7, 7, 7]


def test_cell_budget_gives_partial_report(tmp_path, capsys):
    path = write(tmp_path, CONICS, 32003)
    code, rep = run_json(capsys, ["--input", path, "--oracle", "linear-algebra", "--cell-budget", "5000"])
    assert rep["partial"] is True
    assert code == 3


def test_surface_mode(capsys):
    code, rep = run_json(capsys, ["--mode", "surface-experiment", "--m", "5", "--p", "2"])
    assert code == 0
    assert rep["computedExponents"] == [7] * 6 + [8] * 16 + [9] * 6
    assert rep["surface"]["experimental"] is True
    names = {c["name"]: c["pass"] for c in rep["checks"]}
    assert names["count_identity_m=6"] and names["count_identity_m=7"]

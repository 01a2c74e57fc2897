import io
import json
import subprocess
import sys

import pytest

from rcsiegel.cli import EXIT_MATH, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, cache_key, export_latex, main
from rcsiegel.rcsolve import PBasisExpr


def run(*argv, cache=None):
    out, err = io.StringIO(), io.StringIO()
    args = list(argv) + (["--cache-dir", str(cache)] if cache else ["--no-cache"])
    code = main(args, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_export_latex_examples():
    assert export_latex(PBasisExpr(1, 2, {(0, 1): 1})) == "P_{1}"
    assert export_latex(PBasisExpr(1, 2, {(1, 0): 4, (0, 1): -2})) == "4 P_{0} - 2 P_{1}"
    assert export_latex(PBasisExpr(1, 2, {})) == "0"
    assert export_latex(PBasisExpr(1, 4, {(2, 0): -1, (1, 1): "1/2"})) == "-P_{0}^{2} + \\frac{1}{2} P_{0} P_{1}"


def test_solve_json(tmp_path):
    code, out, _ = run("solve", "--n", "2", "--v", "2", "--d1", "4", "--d2", "4", cache=tmp_path)
    assert code == EXIT_OK
    expr = PBasisExpr.from_json(json.loads(out))
    assert len(expr.coeffs) == 3 and expr[(0, 0, 1)] == 1


def test_cache_is_reused(tmp_path):
    argv = ("solve", "--n", "2", "--v", "4", "--d1", "4", "--d2", "6")
    first = run(*argv, cache=tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    # a hand-edited entry is served back, proving the cache is read
    data = json.loads(files[0].read_text())
    data["normalization"] = "from-cache"
    files[0].write_text(json.dumps(data))
    assert json.loads(run(*argv, cache=tmp_path)[1])["normalization"] == "from-cache"
    assert first[0] == EXIT_OK


def test_cache_key_depends_on_params():
    assert cache_key("solve", {"n": 1}) != cache_key("solve", {"n": 2})
    assert cache_key("solve", {"n": 1, "v": 2}) == cache_key("solve", {"v": 2, "n": 1})


def test_corrupt_cache_entry_is_recomputed(tmp_path):
    argv = ("solve", "--n", "1", "--v", "2", "--d1", "4", "--d2", "4")
    run(*argv, cache=tmp_path)
    (f,) = tmp_path.iterdir()
    f.write_text("{not json")
    code, out, _ = run(*argv, cache=tmp_path)
    assert code == EXIT_OK and json.loads(out)["n"] == 1


def test_odd_weight_exit_code():
    code, _, err = run("solve", "--n", "1", "--v", "3", "--d1", "4", "--d2", "4")
    assert code == EXIT_MATH
    assert "trivial space: v must be even" in err


def test_singular_exit_code():
    code, _, err = run("solve", "--n", "2", "--v", "2", "--d1", "1", "--d2", "2")
    assert code == EXIT_MATH and "singular" in err


@pytest.mark.parametrize("argv", [
    ("solve", "--n", "0", "--v", "2", "--d1", "4", "--d2", "4"),
    ("solve", "--n", "1"),
    ("frobnicate",),
    ("closed-form", "--kind", "cohen", "--n", "2", "--v", "2", "--d1", "4", "--d2", "4"),
    ("closed-form", "--kind", "v2", "--n", "2", "--v", "4", "--d1", "4", "--d2", "4"),
    ("bracket", "--k", "5", "--l", "6", "--t", "1"),
    ("export",),
])
def test_usage_errors(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_bracket_command():
    code, out, _ = run("bracket", "--k", "4", "--l", "6", "--t", "1", "--terms", "20")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["coefficients"][0] == "0/1" and data["coefficients"][1] == "-3456/1"
    assert data["weight"] == 12 and data["truncation"] == 20


def test_bracket_ingests_files(tmp_path):
    from rcsiegel.brackets import eisenstein
    f = tmp_path / "f.json"
    f.write_text(eisenstein(4, 10).dumps())
    code, out, _ = run("bracket", "--f", str(f), "--l", "6", "--t", "1", "--terms", "10")
    assert code == EXIT_OK and json.loads(out)["truncation"] == 10


def test_verify_passes():
    code, out, _ = run("verify", "--n", "2", "--v", "4", "--d1", "4", "--d2", "6")
    report = json.loads(out)
    assert code == EXIT_OK and report["all_pass"]
    names = {c["check"] for c in report["checks"]}
    assert {"operator_identities", "harmonic_expanded", "closed_form_v4", "closed_form_genus2",
            "kernel_dimension"} <= names


def test_verify_reports_failure(monkeypatch):
    from rcsiegel import cli, rcsolve
    monkeypatch.setattr(cli.rcsolve, "is_harmonic", lambda *a: False)
    code, out, _ = run("verify", "--n", "1", "--v", "2", "--d1", "4", "--d2", "4")
    assert code == EXIT_VERIFY and not json.loads(out)["all_pass"]


def test_kernel_dim_command():
    code, out, _ = run("kernel-dim", "--n", "3", "--v", "2", "--d1", "2", "--d2", "2")
    assert code == EXIT_OK and json.loads(out)["dimension"] == 2


def test_cusp_check_command():
    code, out, _ = run("cusp-check", "--n", "2", "--v", "2", "--d1", "4", "--d2", "4", "--trials", "5")
    assert code == EXIT_OK and json.loads(out)["passed"] == 5


def test_vector_command():
    code, out, _ = run("vector", "--kind", "mixed", "--n", "2", "--m", "2", "--d1", "6", "--d2", "6",
                       "--equivariance-trials", "3")
    data = json.loads(out)
    assert code == EXIT_OK and data["equivariance"]["all_pass"] and len(data["family"]["components"]) == 3


def test_export_from_file(tmp_path):
    f = tmp_path / "e.json"
    f.write_text(PBasisExpr(1, 2, {(1, 0): 4, (0, 1): -2}).dumps())
    code, out, _ = run("export", "--input", str(f))
    assert code == EXIT_OK and out.strip() == "4 P_{0} - 2 P_{1}"


@pytest.mark.parametrize("fmt", ["json", "text", "latex"])
def test_formats(fmt):
    code, out, _ = run("closed-form", "--kind", "genus2", "--n", "2", "--v", "4", "--d1", "4",
                       "--d2", "4", "--format", fmt)
    assert code == EXIT_OK and out.strip()


def test_repeated_runs_byte_identical(tmp_path):
    cmd = [sys.executable, "-m", "rcsiegel.cli", "cusp-check", "--n", "2", "--v", "4", "--d1", "4", "--d2", "4",
           "--trials", "4", "--seed", "9", "--cache-dir", str(tmp_path)]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a

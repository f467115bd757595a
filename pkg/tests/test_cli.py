import csv
import io
import json
import os
import subprocess
import sys

import pytest

from maglab import fixtures
from maglab.cli import main
from maglab.io import parse_points, to_json

TRIPLE_JSON = '{"dim": 2, "points": [[0, 0], [4, 8], [7, 3]]}'


@pytest.fixture
def triple_file(tmp_path):
    p = tmp_path / "triple.json"
    p.write_text(TRIPLE_JSON)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_magnitude_json(capsys, triple_file):
    code, out, _ = run(capsys, "magnitude", "--points", triple_file)
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["magnitude"] - 2.99923) <= 5e-6
    assert doc["skewness"] == 3 and doc["is_skew"] is True
    assert len(doc["weighting"]) == 3


def test_magnitude_singleton_csv(capsys, tmp_path):
    p = tmp_path / "one.csv"
    p.write_text("x,y\n1.5,2.5\n")
    code, out, _ = run(capsys, "magnitude", "--points", str(p), "--format", "csv")
    assert code == 0
    rows = dict(csv.reader(io.StringIO(out)))
    assert float(rows["magnitude"]) == 1.0
    assert rows["skewness"] == "inf"


def test_duplicate_row(capsys, tmp_path):
    p = tmp_path / "dup.csv"
    p.write_text("0,0\n1,2\n0,0\n")
    code, _, err = run(capsys, "magnitude", "--points", str(p))
    assert code == 2
    assert "duplicate point" in err


@pytest.mark.parametrize("text", ["{not json", '{"points": 3}', "1,2\n3\n", "a,b\nx,y\n", '{"dim": 3, "points": [[1, 2]]}'])
def test_parse_errors(capsys, tmp_path, text):
    p = tmp_path / ("bad.json" if text.startswith("{") else "bad.csv")
    p.write_text(text)
    code, _, err = run(capsys, "magnitude", "--points", str(p))
    assert code == 2 and "input error" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "magnitude", "--points", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in err


def test_cubes_json(capsys, triple_file):
    code, out, _ = run(capsys, "cubes", "--points", triple_file, "--r", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["alpha_table"]["system"] == "vertex"
    assert abs(doc["alpha_table"]["alpha"][3] - 0.0028011) <= 5e-7
    assert doc["cross_residual"] <= 1e-8
    assert doc["condition_estimate"] >= 1
    assert len(doc["weight_measure"]["dirac"]) == 5


@pytest.mark.parametrize("system", ["vertex", "corner"])
def test_cubes_csv(capsys, triple_file, system):
    code, out, _ = run(capsys, "cubes", "--points", triple_file, "--r", "0.5", "--system", system, "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "point_index,s1,s2,x1,x2,alpha"
    assert len(lines) == 14 and lines[-1].startswith("# magnitude=")
    assert f"system={system}" in lines[-1]


def test_cubes_radius_too_large(capsys, triple_file):
    code, _, err = run(capsys, "cubes", "--points", triple_file, "--r", "1.5")
    assert code == 4
    assert "radius exceeds skew(F)/2" in err


def test_cubes_numerical_failure(capsys, triple_file):
    code, _, err = run(capsys, "cubes", "--points", triple_file, "--r", "1", "--cross-tol", "0")
    assert code == 3 and "numerical failure" in err


def test_sweep_csv(capsys, triple_file):
    code, out, _ = run(
        capsys, "sweep", "--points", triple_file, "--r-start", "0.1", "--r-end", "0.0001", "--steps", "4", "--format", "csv"
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["r", "mg_cubes", "mg_F", "gap"]
    gaps = [float(r["gap"]) for r in rows]
    assert all(g > 0 for g in gaps) and gaps == sorted(gaps, reverse=True)


def test_sweep_linear_json(capsys, triple_file):
    code, out, _ = run(
        capsys, "sweep", "--points", triple_file, "--r-start", "1", "--r-end", "0.25", "--steps", "4", "--schedule", "linear"
    )
    assert code == 0
    assert [row["r"] for row in json.loads(out)["rows"]] == [1.0, 0.75, 0.5, 0.25]


@pytest.mark.parametrize("args", [("--r-start", "0.1", "--r-end", "0.2", "--steps", "3"),
                                  ("--r-start", "2", "--r-end", "0.1", "--steps", "3"),
                                  ("--r-start", "0.1", "--r-end", "0.01", "--steps", "0")])
def test_sweep_domain(capsys, triple_file, args):
    code, _, _ = run(capsys, "sweep", "--points", triple_file, *args)
    assert code == 4


def test_sweep_non_skew(capsys, tmp_path):
    p = tmp_path / "ns.json"
    p.write_text('{"points": [[0, 0], [1, 0]]}')
    code, _, err = run(capsys, "sweep", "--points", str(p), "--r-start", "0.1", "--r-end", "0.01", "--steps", "2")
    assert code == 4 and "not skew" in err


def test_conjecture(capsys, triple_file):
    code, out, err = run(
        capsys, "conjecture", "--points", triple_file, "--r-start", "0.015", "--r-end", "0.15", "--steps", "6", "--format", "csv"
    )
    assert code == 0
    assert out.splitlines()[0] == "r,logdet"
    assert "k_expected,fitted_exponent,fitted_log_coeff,expected_log_coeff" in out
    assert "informational" in err and "k = 12" in err


def test_conjecture_too_few_steps(capsys, triple_file):
    code, _, _ = run(capsys, "conjecture", "--points", triple_file, "--r-start", "0.1", "--r-end", "0.01", "--steps", "3")
    assert code == 4


def test_perturb_reproducible(capsys, triple_file):
    argv = ("perturb", "--points", triple_file, "--scale", "0.001", "--trials", "20", "--seed", "42", "--format", "csv")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    rows = list(csv.DictReader(io.StringIO(a)))
    assert len(rows) == 20 and list(rows[0]) == ["trial", "d_H", "delta_mg"]


def test_perturb_json(capsys, triple_file):
    code, out, _ = run(capsys, "perturb", "--points", triple_file, "--scale", "0.01", "--trials", "3")
    assert code == 0 and [t["trial"] for t in json.loads(out)] == [0, 1, 2]


def test_json_round_trip(capsys, triple_file, tmp_path):
    _, out, _ = run(capsys, "magnitude", "--points", triple_file)
    again = tmp_path / "again.json"
    again.write_text(json.dumps(json.loads(out)["points"]))
    _, out2, _ = run(capsys, "magnitude", "--points", str(again))
    assert out == out2


def test_point_json_round_trip_exact():
    F = parse_points('{"points": [[0.1, 0.7], [1e-17, 3.3333333333333335]]}')
    G = parse_points(to_json(F.to_dict()))
    assert F == G


def test_out_file(capsys, triple_file, tmp_path):
    target = tmp_path / "report.json"
    target.write_text("stale")
    code, out, _ = run(capsys, "magnitude", "--points", triple_file, "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["magnitude"] > 2.99
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".")] == []


def test_env_residual_tol(capsys, tmp_path, monkeypatch):
    # close points: the float64 residual is a few ulps, never exactly zero
    p = tmp_path / "close.csv"
    p.write_text("0,0\n0.1,0.3\n0.2,0.05\n0.35,0.2\n0.5,0.45\n")
    monkeypatch.setenv("MAGLAB_RESIDUAL_TOL", "1e-40")
    code, _, err = run(capsys, "magnitude", "--points", str(p))
    assert code == 3 and "numerical failure" in err
    # an explicit flag wins over the environment
    code, _, _ = run(capsys, "magnitude", "--points", str(p), "--residual-tol", "1e-10")
    assert code == 0
    monkeypatch.setenv("MAGLAB_RESIDUAL_TOL", "tiny")
    code, _, _ = run(capsys, "magnitude", "--points", str(p))
    assert code == 2


def test_check_passes(capsys):
    code, out, _ = run(capsys, "check")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == len(fixtures.CHECKS)
    assert all(line.startswith("PASS") for line in lines)


def test_check_detects_corruption(capsys, monkeypatch):
    bad = list(fixtures.TRIPLE_ALPHAS_R1)
    bad[3] += 1e-3
    monkeypatch.setattr(fixtures, "TRIPLE_ALPHAS_R1", tuple(bad))
    code, out, err = run(capsys, "check")
    assert code == 1
    assert "FAIL  triple alpha table" in out and "expected" in out
    assert "triple alpha table" in err


def test_check_csv_and_json(capsys):
    code, out, _ = run(capsys, "check", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and {r["status"] for r in rows} == {"pass"}
    code, out, _ = run(capsys, "check", "--format", "json")
    assert code == 0 and all(r["passed"] for r in json.loads(out))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "maglab", "check"], capture_output=True, text=True,
                          env={**os.environ, "PYTHONWARNINGS": "error"})
    assert proc.returncode == 0, proc.stderr

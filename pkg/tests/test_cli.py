import csv
import io
import json
import math

import pytest
from numpy.testing import assert_allclose

from conftest import coef_distance
from harmonia.cli import CSV_HEADER, ConfigError, builtin_polynomial, main, parse_args
from harmonia.harmonic import HarmonicExpansion, reconstruct
from harmonia.polynomial import HomogeneousPolynomial, evaluate


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_builtins():
    m = builtin_polynomial("motzkin")
    assert m.n == 3 and m.degree == 6 and len(m) == 4
    c = 1 / math.sqrt(3)
    assert abs(evaluate(m, [c, c, c])) < 1e-15
    r = builtin_polynomial("robinson")
    assert r.n == 4 and r.degree == 4
    assert evaluate(r, [0, 0, 0, 1]) == 0.0
    assert all(float(v).is_integer() for v in r.terms.values())
    with pytest.raises(ConfigError):
        builtin_polynomial("choi-lam")


def test_bound_csv_row_count(capsys):
    code, out, err = run_cli(capsys, "bound", "--builtin", "motzkin", "--kernel", "power", "--s-min", "2", "--s-max", "10", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 10
    # s = 2 < k = 3 leaves the power kernel singular: reported, row kept, exit 2
    assert code == 2 and "lambda_6" in err
    assert rows[1][2:4] == ["", ""]
    assert all(row[3] for row in rows[2:])


def test_bound_success_and_json(capsys, tmp_path):
    out_path = tmp_path / "b.json"
    code, _, _ = run_cli(capsys, "bound", "--builtin", "robinson", "--kernel", "fangfawzi", "--s-min", "2", "--s-max", "4", "--format", "json", "--out", str(out_path))
    assert code == 0
    rows = json.loads(out_path.read_text())
    assert [r["s"] for r in rows] == [2, 3, 4]
    assert all(r["lower"] <= 0 <= r["upper"] and r["elapsed_ms"] is None for r in rows)


def test_bound_from_json_file(capsys, tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps(builtin_polynomial("motzkin").to_dict()))
    code, out, _ = run_cli(capsys, "bound", "--poly", str(path), "--kernel", "power", "--s-min", "3", "--s-max", "4")
    assert code == 0
    _, ref, _ = run_cli(capsys, "bound", "--builtin", "motzkin", "--kernel", "power", "--s-min", "3", "--s-max", "4")
    assert out == ref


def test_bound_timings_flag(capsys):
    code, out, _ = run_cli(capsys, "bound", "--builtin", "motzkin", "--s-min", "3", "--s-max", "3", "--timings")
    assert code == 0
    assert float(out.splitlines()[1].split(",")[-1]) >= 0


def test_csv_floats_round_trip(capsys):
    from harmonia.hierarchy import sweep

    _, out, _ = run_cli(capsys, "bound", "--builtin", "motzkin", "--kernel", "fangfawzi", "--s-min", "3", "--s-max", "5")
    expected = sweep(builtin_polynomial("motzkin"), "fangfawzi", range(3, 6))
    for row, r in zip(list(csv.DictReader(io.StringIO(out))), expected):
        assert float(row["lower"]) == r.lower and float(row["tau"]) == r.tau


@pytest.mark.parametrize(
    "argv",
    [
        ["bound", "--builtin", "motzkin", "--s-min", "5", "--s-max", "3"],
        ["bound", "--builtin", "motzkin", "--poly", "x.json", "--s-min", "3", "--s-max", "4"],
        ["bound", "--s-min", "3", "--s-max", "4"],
        ["bound", "--poly", "/nonexistent/f.json", "--s-min", "3", "--s-max", "4"],
        ["frobnicate"],
        ["cubature", "--n", "3"],
    ],
)
def test_input_errors_exit_3(capsys, argv):
    assert run_cli(capsys, *argv)[0] == 3


def test_bad_json_exit_3(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 3, "degree": 2, "terms": [{"exp": [1, 0, 0], "coef": 1.0}]}')
    assert run_cli(capsys, "decompose", "--poly", str(path))[0] == 3


def test_fangfawzi_needs_s_at_least_k(capsys):
    code, _, err = run_cli(capsys, "bound", "--builtin", "motzkin", "--kernel", "fangfawzi", "--s-min", "2", "--s-max", "5")
    assert code == 2 and "s >= k" in err


def test_parse_args_config():
    cfg = parse_args(["bound", "--builtin", "motzkin", "--s-min", "3", "--s-max", "4", "--per-level-rules"])
    assert cfg.builtin == "motzkin" and cfg.kernel == "power" and cfg.shared_rule is False


def test_cubature_verify(capsys):
    code, out, _ = run_cli(capsys, "cubature", "--n", "3", "--t", "4", "--verify")
    assert code == 0
    assert float(out.strip().split("max_residual=")[1]) < 1e-9


def test_cubature_csv(capsys, tmp_path, monkeypatch):
    code, out, _ = run_cli(capsys, "cubature", "--n", "3", "--t", "1")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "x1,x2,x3,weight" and len(lines) == 9
    monkeypatch.setenv("HARMONIA_CACHE_DIR", str(tmp_path / "cache"))
    out_path = tmp_path / "rule.csv"
    assert run_cli(capsys, "cubature", "--n", "4", "--t", "2", "--out", str(out_path))[0] == 0
    assert len(out_path.read_text().splitlines()) == 55
    assert (tmp_path / "cache" / "rule_n4_t2.csv").exists()


def test_decompose_round_trip(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "decompose", "--builtin", "motzkin")
    assert code == 0
    comps = [HomogeneousPolynomial.from_dict(d) for d in json.loads(out)]
    assert [c.degree for c in comps] == [0, 2, 4, 6]
    back = reconstruct(HarmonicExpansion(3, 3, tuple(comps)))
    assert coef_distance(back, builtin_polynomial("motzkin")) < 1e-12


def test_decompose_odd_degree_exit_3(capsys, tmp_path):
    path = tmp_path / "odd.json"
    path.write_text(json.dumps(HomogeneousPolynomial.variable(3, 0).to_dict()))
    assert run_cli(capsys, "decompose", "--poly", str(path))[0] == 3


def test_kernel_command(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "kernel", "--n", "3", "--k", "1", "--s", "1")
    assert code == 0 and json.loads(out) == {"n": 3, "s": 1, "lambdas": [1.0, 0.4]}
    path = tmp_path / "k.json"
    assert run_cli(capsys, "kernel", "--n", "3", "--k", "2", "--s", "5", "--kind", "fangfawzi", "--out", str(path))[0] == 0
    data = json.loads(path.read_text())
    assert data["s"] == 5 and len(data["lambdas"]) == 6
    assert_allclose(data["lambdas"][0], 1.0, atol=1e-12)
    assert run_cli(capsys, "kernel", "--n", "3", "--k", "3", "--s", "2", "--kind", "fangfawzi")[0] == 2


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "harmonia", "kernel", "--n", "3", "--k", "1", "--s", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lambdas"] == [1.0, 0.4]

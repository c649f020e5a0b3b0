import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from valdist.cli import parse_sequence, run
from valdist.errors import InputError


def _run(argv, capsys):
    code = run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_fmt_example(tmp_path, capsys):
    path = tmp_path / "fmt.csv"
    code, rep = _run(["fmt", "--map", "1 | 0,0,0,1", "--divisor", "1; (1,0)=1", "--r", "0.9",
                      "--out-csv", str(path), "--no-timestamp"], capsys)
    assert code == 0 and rep["verdict"] == "PASS"
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 1 and abs(float(rows[0]["residual"])) <= 1e-6
    assert float(rows[0]["T_geom"]) == pytest.approx(0.5 * np.log1p(0.9 ** 6), abs=1e-9)
    assert rep["convention"] == "ddc=laplacian/2pi"
    assert set(rep) >= {"command", "config", "convention", "results", "verdict", "seed"}


def test_mason_example(capsys):
    code, rep = _run(["mason", "--a", "0,0,1", "--b", "1,-2", "--no-timestamp"], capsys)
    assert code == 0 and rep["results"]["checks"][0]["residual"] == 0


def test_rh_corrupted_degree_is_input_error(capsys):
    assert run(["rh", "--map", "0,0,1 | 1", "--degree", "3"]) == 1
    assert "degree" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["fmt", "--map", "1 | 0,1", "--r", "1.5"],
    ["fmt", "--map", "1 | 0,x"],
    ["fmt", "--map", "1 | 0,1", "--tol", "1e-15"],
    ["fmt", "--map", "1 | 0,1", "--divisor", "1; (1,0,0)=1"],
    ["gromov", "--seq", "nonsense"],
    ["mason"],
])
def test_input_errors_exit_one(argv, capsys):
    assert run(argv) == 1


def test_failed_verdict_exits_two(capsys):
    code = run(["gromov", "--seq", "g:[1:(2z)^n],n=1..8", "--bound", "1", "--no-timestamp",
                "--r-grid", "0.6,0.8", "--mesh", "32"])
    assert code == 2
    assert json.loads(capsys.readouterr().out)["verdict"] == "FAIL"


def test_identity_suites(capsys):
    for argv in (["rh", "--random", "5", "--seed", "3"],
                 ["logrh", "--map", "1|0,0,1", "--boundary", "0,1,inf"],
                 ["taut", "--map", "1|9/4,-1,1", "--r", "0.8"],
                 ["jensen", "--map", "1|0,1,1"]):
        code, rep = _run(argv + ["--no-timestamp"], capsys)
        assert code == 0, argv


def test_deterministic_json(tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"m{k}.json"
        assert run(["mason", "--random", "6", "--seed", "11", "--no-timestamp", "--out-json", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["seed"] == 11


def test_timestamp_present_by_default(capsys):
    _, rep = _run(["mason", "--a", "0,1", "--b", "1"], capsys)
    assert "timestamp" in rep


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# flat key = value\nmap = 1|0,0,1\nr_grid = 0.3,0.6\ntol = 1e-6\n")
    _, rep = _run(["fmt", "--config", str(cfg), "--no-timestamp"], capsys)
    assert rep["config"]["radii"] == [0.3, 0.6]
    _, rep = _run(["fmt", "--config", str(cfg), "--r", "0.5", "--r-grid", "0.4", "--no-timestamp"], capsys)
    assert rep["config"]["radii"] == [0.4]
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(["fmt", "--config", str(bad)]) == 1


def test_parse_sequence():
    ns, maps = parse_sequence("geom:[1:(2z)^n],n=1..50")
    assert ns == list(range(1, 51)) and maps[2].degree == 3
    assert maps[2].components[1].exact_coeffs[3] == 8
    ns, maps = parse_sequence("s:[1:z+1/n],n=10,100,1000")
    assert ns == [10, 100, 1000]
    assert maps[1].components[1](np.array([0j]))[0] == pytest.approx(0.01)
    ns, _ = parse_sequence("g:[1:(2z)^n+1],n=5..50:5")
    assert ns == list(range(5, 55, 5))
    with pytest.raises(InputError):
        parse_sequence("g:[1:z],n=5..1")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "valdist", "mason", "--a", "0,0,1", "--b", "1,-2",
                           "--no-timestamp"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdict"] == "PASS"

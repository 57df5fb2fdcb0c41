import json
import subprocess
import sys

import numpy as np
import pytest
import yaml

from specconc.cli import main
from specconc.linalg import write_matrix_csv


def write_cfg(path, **over):
    cfg = {
        "ensemble": {"kind": "walsh_bernoulli", "k": 6},
        "function": "sqrt_abs",
        "center": {"kind": "median", "pilot_reps": 200},
        "epsilons": [0.05, 0.1, 0.2, 0.3, 0.4],
        "reps": 1000,
        "seed": 7,
        "fast_path": True,
    }
    cfg.update(over)
    path.write_text(yaml.safe_dump(cfg))
    return path


def test_bound_line(capsys):
    assert main(["bound", "T1_BV", "n=100", "m=100", "V=1", "--eps", "0.1"]) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header == "epsilon,exponent,bound"
    eps, expo, bound = (float(v) for v in row.split(","))
    assert eps == 0.1
    assert expo == pytest.approx(-2.0, rel=1e-14)
    assert bound == pytest.approx(0.270670566473, rel=1e-11)


def test_bound_errors(capsys):
    assert main(["bound", "T9", "--eps", "0.1"]) == 2
    assert main(["bound", "T1_BV", "n=1", "--eps", "0.1"]) == 3
    assert "V" in capsys.readouterr().err


def test_spectrum_identity(tmp_path, capsys):
    write_matrix_csv(tmp_path / "i.csv", np.eye(4))
    assert main(["spectrum", str(tmp_path / "i.csv")]) == 0
    assert capsys.readouterr().out == "1\n1\n1\n1\n"


def test_spectrum_wishart_and_asymmetric(tmp_path, capsys):
    write_matrix_csv(tmp_path / "x.csv", np.array([[3.0, 0.0], [0.0, 4.0]]))
    assert main(["spectrum", str(tmp_path / "x.csv"), "--wishart", "-o", str(tmp_path / "s.txt")]) == 0
    vals = [float(v) for v in (tmp_path / "s.txt").read_text().split()]
    assert np.allclose(vals, [4.5, 8.0])
    write_matrix_csv(tmp_path / "a.csv", np.array([[0.0, 1.0], [2.0, 0.0]]))
    assert main(["spectrum", str(tmp_path / "a.csv")]) == 2
    assert main(["spectrum", str(tmp_path / "missing.csv")]) == 3


def test_run_example_config(tmp_path, capsys):
    cfg = write_cfg(tmp_path / "cfg.yaml")
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    lines = (out / "tails.csv").read_text().splitlines()
    assert len(lines) == 6
    assert all(line.endswith(",false") for line in lines[1:])
    doc = json.loads((out / "tails.json").read_text())
    assert doc["config"]["seed"] == 7 and doc["seeds"]["estimation_indices"] == [200, 1200]
    assert doc["violated"] is False
    assert doc["config"]["bounds"][0]["tag"] == "T1_LIP"


def test_run_format_and_seed_override(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.yaml")
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "a"), "--format", "json", "--seed", "3"]) == 0
    assert not (tmp_path / "a" / "tails.csv").exists()
    assert json.loads((tmp_path / "a" / "tails.json").read_text())["config"]["seed"] == 3


def test_run_validation_failure_writes_nothing(tmp_path, capsys):
    cfg = write_cfg(tmp_path / "cfg.yaml", epsilons=[])
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 2
    assert not out.exists()
    assert "epsilons" in capsys.readouterr().err


def test_run_flags_violation(tmp_path, capsys):
    # an overstated dimension makes the mean bound absurdly small
    cfg = write_cfg(
        tmp_path / "cfg.yaml",
        function="indicator(0.5)",
        center={"kind": "mean", "pilot_reps": 200},
        bounds=[{"tag": "T1_BV", "n": 10**6, "m": 1}],
    )
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1
    assert "VIOLATED" in capsys.readouterr().err
    assert ",true" in (tmp_path / "o" / "tails.csv").read_text()


def test_run_reports_non_normative(tmp_path):
    cfg = write_cfg(tmp_path / "cfg.yaml", function="indicator(0.5)", center={"kind": "median", "pilot_reps": 200})
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert all(line.endswith(",n/a") for line in (tmp_path / "o" / "tails.csv").read_text().splitlines()[1:])


def test_gen(tmp_path, capsys):
    assert main(["gen", "walsh_bernoulli", "k=1", "p=1"]) == 0
    assert capsys.readouterr().out == "1,1\n1,-1\n"
    assert main(["gen", "ma2", "n=3", "m=2", "B=zero", "--statistic", "-o", str(tmp_path / "s.csv")]) == 0
    s = np.loadtxt(tmp_path / "s.csv", delimiter=",")
    assert s.shape == (3, 3) and np.array_equal(s, s.T)
    cfg = write_cfg(tmp_path / "cfg.yaml")
    assert main(["gen", "--config", str(cfg), "--rep", "2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 64
    assert main(["gen"]) == 2


def test_selftest_quick(capsys):
    assert main(["selftest", "--quick", "--trials", "100"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 10


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "specconc", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("specconc ")


@pytest.mark.slow
def test_selftest_full(capsys):
    assert main(["selftest"]) == 0

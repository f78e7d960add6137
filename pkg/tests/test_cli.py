import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from rbmtail.cli import main
from rbmtail.distributions import parse_distribution, sample

E = math.e


def write(tmp_path, values, name="data.txt"):
    f = tmp_path / name
    f.write_text("".join(f"{v!r}\n" for v in values))
    return str(f)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEstimate:
    def test_two_points_fixed_s(self, tmp_path, capsys):
        code, out, _ = run(capsys, "estimate", write(tmp_path, [1.0, E]), "--threshold", "s:2")
        assert code == 0
        doc = json.loads(out)
        assert doc["gamma_hat"] == pytest.approx(1.0)
        assert doc["s_hat"] == 2 and doc["k_hat"] == 2.0
        assert set(doc) >= {"estimator", "n_used", "n_dropped", "gamma_hat", "k_hat", "s_hat",
                            "stderr"}

    def test_missing_file(self, tmp_path, capsys):
        code, out, err = run(capsys, "estimate", str(tmp_path / "nope.txt"))
        assert code == 2
        assert out == "" and "nope.txt" in err

    def test_parse_error_has_line(self, tmp_path, capsys):
        f = tmp_path / "bad.txt"
        f.write_text("1.0\n2.0\nabc\n")
        code, _, err = run(capsys, "estimate", str(f))
        assert code == 2 and "3" in err

    def test_insufficient(self, tmp_path, capsys):
        code, _, _ = run(capsys, "estimate", write(tmp_path, [-1.0, -2.0, 5.0]))
        assert code == 3

    def test_frechet_auto(self, tmp_path, capsys):
        x = sample(parse_distribution("frechet:2"), 500, seed=2024)
        code, out, _ = run(capsys, "estimate", write(tmp_path, x.tolist()))
        assert code == 0
        assert 0.3 <= json.loads(out)["gamma_hat"] <= 0.7

    def test_hill_auto_and_fixed(self, tmp_path, capsys):
        f = write(tmp_path, sample(parse_distribution("frechet:2"), 300, seed=1).tolist())
        code, out, _ = run(capsys, "estimate", f, "--estimator", "hill")
        assert code == 0 and json.loads(out)["s_hat"] is None
        code, out, _ = run(capsys, "estimate", f, "--estimator", "smoohill", "--threshold", "k:20")
        assert code == 0 and json.loads(out)["k_hat"] == 20.0
        code, _, _ = run(capsys, "estimate", f, "--estimator", "smoohill")
        assert code == 2

    def test_cap_and_out(self, tmp_path, capsys):
        f = write(tmp_path, list(range(1, 101)))
        out_file = tmp_path / "est.json"
        code, out, _ = run(capsys, "estimate", f, "--cap", "50", "--out", str(out_file))
        assert code == 0 and out == ""
        doc = json.loads(out_file.read_text())
        assert doc["n_used"] == 50 and doc["n_capped"] == 50


class TestPath:
    def test_three_points(self, tmp_path, capsys):
        code, out, _ = run(capsys, "path", write(tmp_path, [1.0, E, E**2]), "--estimators", "rbm")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0
        assert rows[0] == ["k", "s", "gamma_rbm"]
        assert [float(r[0]) for r in rows[1:]] == [2.0, 3.0]
        assert float(rows[1][2]) == pytest.approx(1.0)
        assert float(rows[2][2]) == pytest.approx(4 / 3)

    def test_constant(self, tmp_path, capsys):
        code, out, _ = run(capsys, "path", write(tmp_path, [2.0] * 10))
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["k", "s", "gamma_rbm", "gamma_hill", "gamma_smoohill"]
        assert all(float(v) == 0.0 for r in rows[1:] for v in r[2:])

    def test_lf_endings(self, tmp_path, capsys):
        _, out, _ = run(capsys, "path", write(tmp_path, [1.0, 2.0, 5.0, 9.0]))
        assert "\r" not in out


class TestBench:
    def test_frechet_row(self, capsys):
        code, out, _ = run(capsys, "bench", "frechet:2", "--n", "200", "--reps", "50",
                           "--seed", "7", "--estimators", "rbm")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0
        assert rows[0]["estimator"] == "rbm" and rows[0]["seed"] == "7"
        assert 0.0 < float(rows[0]["rmse"]) < 0.3

    def test_bad_spec(self, capsys):
        code, out, _ = run(capsys, "bench", "burr:1", "--n", "200", "--reps", "5")
        assert code == 4 and out == ""

    def test_json(self, capsys):
        code, out, _ = run(capsys, "bench", "t:6", "--n", "100", "--reps", "3", "--format", "json")
        assert code == 0 and json.loads(out)["rows"]

    def test_repeatable(self, capsys):
        args = ("bench", "t:3", "--n", "100", "--reps", "8", "--seed", "1")
        assert run(capsys, *args)[1] == run(capsys, *args)[1]


class TestProcess:
    def test_rho_minus_one(self, capsys):
        code, out, _ = run(capsys, "process", "--rho", "-1", "--paths", "200", "--seed", "7")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 1
        assert math.isfinite(float(rows[0]["tau_star"]))

    def test_multiple_rho(self, capsys):
        code, out, _ = run(capsys, "process", "--rho=-0.5,-2", "--rho", "-4", "--paths", "50")
        assert code == 0 and len(out.splitlines()) == 4

    def test_nonnegative_rho(self, capsys):
        code, _, _ = run(capsys, "process", "--rho", "0", "--paths", "10")
        assert code == 4


def test_module_entry_point(tmp_path):
    f = write(tmp_path, [1.0, E])
    res = subprocess.run([sys.executable, "-m", "rbmtail", "estimate", f, "--threshold", "s:2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["gamma_hat"] == pytest.approx(1.0)

"""
Pruebas de la línea de comandos
"""

import json
import os

import pytest

from shared import cli
from shared.core import second_moment
from shared.utils.errors import ConvergenceError

PETERSEN = os.path.join(os.path.dirname(__file__), '..', 'data', 'petersen.graph')


@pytest.fixture(autouse=True)
def serial_env(monkeypatch, tmp_path):
    monkeypatch.setenv("MAXCUT_WORKERS", "1")
    monkeypatch.setenv("MAXCUT_OUTPUT_DIR", str(tmp_path))


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestOracleCommand:

    def test_k2(self, capsys):
        code, out = _run(capsys, "oracle", "k2", "--n", "2", "--mu1", "2", "--mu2", "1")
        assert code == 0
        result = json.loads(out)
        assert result["value"]["fraction"] == "3/4"
        assert result["value"]["decimal"] == 0.75

    def test_k4(self, capsys):
        code, out = _run(capsys, "oracle", "k4", "--n", "2", "--mu", "1,1,0,0")
        assert code == 0
        assert json.loads(out)["value"]["fraction"] == "1/2"

    def test_poisson(self, capsys):
        code, out = _run(capsys, "oracle", "poisson", "--n", "3", "--mu", "4", "--t", "2,0,2")
        assert code == 0
        assert json.loads(out)["equal"] is True

    def test_moment_with_monte_carlo(self, capsys):
        code, out = _run(
            capsys, "oracle", "moment1", "--n", "4", "--m", "3", "--zn", "2",
            "--samples", "500", "--seed", "1",
        )
        assert code == 0
        result = json.loads(out)
        assert set(result) == {"oracle", "query", "exact", "monte_carlo"}
        estimates = result["monte_carlo"]
        assert estimates["loops_excluded"]["samples"] == 500
        assert estimates["loops_excluded"]["count_loops"] is False
        assert estimates["loops_counted"]["count_loops"] is True
        # Sin lazos la condición es más débil: misma semilla, nunca menos cortes
        assert estimates["difference"] >= 0.0

    def test_second_moment_is_balanced(self, capsys):
        code, out = _run(capsys, "oracle", "moment2", "--n", "2", "--m", "1", "--zn", "1")
        assert code == 0
        result = json.loads(out)
        assert result["query"]["balanced"] is True
        assert result["exact"]["fraction"] == "2"

    def test_invalid_arguments(self, capsys):
        code, out = _run(capsys, "oracle", "moment1", "--n", "3", "--m", "2", "--zn", "1")
        assert code == 2
        result = json.loads(out)
        assert result["success"] is False
        assert result["error"]["code"] == "DOMAIN_ERROR"

    def test_resource_limit(self, capsys):
        code, out = _run(capsys, "oracle", "moment2", "--n", "10", "--m", "2", "--zn", "1")
        assert code == 4
        assert json.loads(out)["error"]["code"] == "RESOURCE_LIMIT"


class TestBoundsCommand:

    def test_negative_c(self, capsys):
        code, out = _run(capsys, "bounds", "--c", "-1")
        assert code == 2
        assert json.loads(out)["metadata"] == {"command": "bounds"}


class TestScanCommand:

    def test_zero_steps(self, capsys):
        code, _ = _run(capsys, "scan", "--x", "0.5", "--steps", "0")
        assert code == 2

    def test_failed_rows_are_na(self, capsys, monkeypatch):
        original = second_moment.solve_saddle

        def flaky(x, beta, *args, **kwargs):
            if beta > 0.28:
                raise ConvergenceError("sin convergencia", achieved_error=1.0)
            return original(x, beta, *args, **kwargs)

        monkeypatch.setattr(second_moment, "solve_saddle", flaky)
        code, out = _run(capsys, "scan", "--x", "0.5", "--beta-min", "0.2", "--beta-max", "0.3", "--steps", "3")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "x,beta,t,theta1,theta2,W,two_w,gap"
        assert len(lines) == 4
        assert lines[3].split(",")[2:] == ["NA"] * 6
        assert "NA" not in lines[1]

    def test_out_file(self, capsys, tmp_path):
        code, out = _run(
            capsys, "scan", "--x", "0.45", "--beta-min", "0.2", "--beta-max", "0.3",
            "--steps", "3", "--out", "scans/x0.45.csv",
        )
        assert code == 0
        summary = json.loads(out)
        assert summary["rows"] == 3
        assert summary["failed"] == 0
        assert (tmp_path / "scans" / "x0.45.csv").read_text(encoding="utf-8").startswith("x,beta,")


class TestSimulateCommand:

    def test_deterministic(self, capsys):
        argv = ("simulate", "--n", "80", "--c", "2", "--trials", "3", "--seed", "7")
        first = _run(capsys, *argv)
        second = _run(capsys, *argv)
        assert first == second
        assert json.loads(first[1])["m"] == 160


class TestCubicCommand:

    def test_petersen_bruteforce(self, capsys):
        code, out = _run(capsys, "cubic", "--graph", PETERSEN, "--bruteforce")
        assert code == 0
        result = json.loads(out)
        assert result["u"] == 3
        assert result["bound"] == 12
        assert result["maxcut"] == 12
        assert result["cut"]["value"] == 12

    def test_bipartite_file(self, capsys, tmp_path):
        (tmp_path / "set.txt").write_text("0 1 2 3\n", encoding="utf-8")
        code, out = _run(capsys, "cubic", "--graph", PETERSEN, "--bipartite", "set.txt")
        assert code == 0
        result = json.loads(out)
        assert result["bipartite_set"] == [0, 1, 2, 3]
        assert result["cut"]["value"] >= result["bound"]

    def test_missing_graph(self, capsys, tmp_path):
        code, out = _run(capsys, "cubic", "--graph", str(tmp_path / "none.graph"), "--bruteforce")
        assert code == 2
        assert json.loads(out)["error"]["code"] == "STORAGE_ERROR"


class TestConfiguration:

    @pytest.mark.parametrize("name,value", [("MAXCUT_WORKERS", "muchos"), ("MAXCUT_BETA_MIN", "0.4")])
    def test_malformed_environment(self, capsys, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        code, out = _run(capsys, "oracle", "k2", "--n", "2", "--mu1", "2", "--mu2", "1")
        assert code == 2
        result = json.loads(out)
        assert result["error"]["code"] == "DOMAIN_ERROR"
        assert result["metadata"] == {"command": "oracle"}

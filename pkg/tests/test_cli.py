import json
import subprocess
import sys

import pytest

from causalot.cli import main, parse_family_token
from causalot.measures import Exponential, Gamma, Gaussian


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture()
def uniform3(tmp_path):
    return write(tmp_path / "u3.json", {
        "support": [0.0, 1.0, 2.0],
        "weights": [1 / 3, 1 / 3, 1 / 3],
    })


class TestFamilyTokens:
    def test_known_tokens(self):
        assert parse_family_token("exp:0.01") == Exponential(0.01)
        assert parse_family_token("gamma:2:0.01") == Gamma(2, 0.01)
        assert parse_family_token("gauss:0:1") == Gaussian(0.0, 1.0)

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown family"):
            parse_family_token("cauchy:1")

    def test_wrong_arity(self):
        with pytest.raises(ValueError, match="parameter"):
            parse_family_token("exp:1:2")

    def test_non_numeric(self):
        with pytest.raises(ValueError, match="non-numeric"):
            parse_family_token("exp:fast")


class TestDiscretize:
    def test_writes_measure_file(self, tmp_path):
        spec = write(tmp_path / "exp.json", {"family": "exponential", "rate": 1.0})
        out = tmp_path / "m.json"
        assert main(["discretize", spec, "--n", "8", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert len(data["support"]) == 8
        assert sum(data["weights"]) == pytest.approx(1.0)

    def test_bad_spec_file_is_usage_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert main(["discretize", str(bad)]) == 1

    def test_missing_file(self, tmp_path):
        assert main(["discretize", str(tmp_path / "absent.json")]) == 1


class TestCheck:
    def test_causal_map_exits_zero(self, tmp_path, uniform3):
        map_file = write(tmp_path / "map.json", {"affine": [1.0, 0.5]})
        assert main(["check", "--measure", uniform3, "--map", map_file]) == 0

    def test_non_causal_map_exits_two(self, tmp_path, uniform3):
        map_file = write(tmp_path / "map.json", {"values": [2.0, 0.0, 1.0]})
        assert main(["check", "--measure", uniform3, "--map", map_file]) == 2

    def test_constant_map_exits_zero(self, tmp_path, uniform3):
        map_file = write(tmp_path / "map.json", {"constant": 700.0})
        assert main(["check", "--measure", uniform3, "--map", map_file]) == 0

    def test_plan_check_writes_report(self, tmp_path, uniform3):
        plan = {
            "source": {"support": [0.0, 1.0], "weights": [0.5, 0.5]},
            "target": {"support": [5.0], "weights": [1.0]},
            "mass": [[0.5], [0.5]],
        }
        plan_file = write(tmp_path / "plan.json", plan)
        out = tmp_path / "report.json"
        assert main(["check", "--plan", plan_file, "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["causal"] is True
        assert report["config"]["command"] == "check"

    def test_needs_some_input(self):
        assert main(["check"]) == 1

    def test_conflicting_inputs(self, tmp_path, uniform3):
        map_file = write(tmp_path / "map.json", {"constant": 1.0})
        assert main(["check", "--plan", uniform3, "--measure", uniform3,
                     "--map", map_file]) == 1

    def test_map_without_measure(self, tmp_path):
        map_file = write(tmp_path / "map.json", {"constant": 1.0})
        assert main(["check", "--map", map_file]) == 1


class TestSolve:
    def test_two_measure_files(self, tmp_path, uniform3):
        nu = write(tmp_path / "nu.json",
                   {"support": [0.5, 10.0], "weights": [0.5, 0.5]})
        out = tmp_path / "result.json"
        assert main(["solve", uniform3, nu, "--out", str(out)]) == 0
        result = json.loads(out.read_text())
        assert result["status"] == "optimal"
        assert result["value"] == pytest.approx(4.25 + 4.0 / 12.0)

    def test_instance_file(self, tmp_path):
        inst = write(tmp_path / "inst.json", {
            "eta": {"support": [1.0, 2.0], "weights": [0.5, 0.5]},
            "nu": {"support": [0.0, 3.0], "weights": [0.5, 0.5]},
            "cost": "abs",
        })
        out = tmp_path / "result.json"
        assert main(["solve", "--instance", inst, "--out", str(out)]) == 0
        assert json.loads(out.read_text())["value"] == pytest.approx(1.5)

    def test_instance_and_files_conflict(self, tmp_path, uniform3):
        inst = write(tmp_path / "inst.json", {})
        assert main(["solve", uniform3, uniform3, "--instance", inst]) == 1

    def test_missing_nu(self, uniform3):
        assert main(["solve", uniform3]) == 1


class TestCouple:
    def test_simulation_csv_and_report(self, tmp_path):
        out = tmp_path / "sample.csv"
        code = main(["couple", "--x", "exp:1", "--tau", "inf", "--z", "exp:0.5",
                     "--n", "500", "--seed", "7", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "X,tau,Z,Y"
        assert len(lines) == 501
        assert all(line.split(",")[1] == "inf" for line in lines[1:])
        report = json.loads((tmp_path / "sample.report.json").read_text())
        assert report["passed"] is True

    def test_byte_identical_reruns(self, tmp_path):
        args = ["couple", "--x", "gamma:2:0.01", "--tau", "exp:0.01",
                "--z", "exp:0.005", "--n", "400", "--seed", "3"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_from_plan(self, tmp_path):
        plan = {
            "source": {"support": [0.0, 1.0], "weights": [0.5, 0.5]},
            "target": {"support": [2.0, 3.0], "weights": [0.5, 0.5]},
            "mass": [[0.25, 0.25], [0.25, 0.25]],
        }
        plan_file = write(tmp_path / "plan.json", plan)
        out = tmp_path / "s.csv"
        code = main(["couple", "--from-plan", plan_file, "--n", "200",
                     "--out", str(out)])
        assert code == 0
        assert len(out.read_text().splitlines()) == 201

    def test_equal_to_x_token(self, tmp_path):
        out = tmp_path / "s.csv"
        code = main(["couple", "--x", "exp:1", "--tau", "equal-to-x",
                     "--z", "exp:1", "--n", "300", "--out", str(out)])
        assert code == 0

    def test_needs_laws_or_plan(self):
        assert main(["couple", "--n", "10"]) == 1

    def test_bad_token_is_usage_error(self, tmp_path):
        code = main(["couple", "--x", "exp:one", "--tau", "inf", "--z", "exp:1",
                     "--n", "10", "--out", str(tmp_path / "s.csv")])
        assert code == 1


class TestExample:
    def test_mixture_small(self, tmp_path):
        code = main(["example", "mixture", "--atoms", "20", "--grid", "15",
                     "--out", str(tmp_path)])
        assert code == 0
        grid = (tmp_path / "mixture_grid.csv").read_text().splitlines()
        assert grid[0] == "x,y,F"
        assert len(grid) == 15 * 15 + 1
        report = json.loads((tmp_path / "mixture_report.json").read_text())
        assert report["causal"] is True
        assert report["max_deviation"] == 0.0

    def test_brownian_grid_contains_known_value(self, tmp_path):
        assert main(["example", "brownian", "--out", str(tmp_path)]) == 0
        rows = (tmp_path / "brownian_grid.csv").read_text().splitlines()[1:]
        lookup = {tuple(r.split(",")[:2]): float(r.split(",")[2]) for r in rows}
        assert lookup[("0", "12.5")] == pytest.approx(0.15729920705028522,
                                                      abs=1e-12)

    def test_gamma_poisson_small(self, tmp_path, capsys):
        code = main(["example", "gamma-poisson", "--atoms", "12",
                     "--out", str(tmp_path)])
        assert code == 0
        result = json.loads((tmp_path / "gamma_poisson_result.json").read_text())
        assert result["status"] == "optimal"
        assert result["analytic_value"] == pytest.approx(100.0)
        assert result["relative_gap"] < 0.1
        assert "relative gap" in capsys.readouterr().out

    def test_unknown_example_rejected(self):
        assert main(["example", "nothere"]) == 1


class TestParsing:
    def test_no_command_is_usage_error(self):
        assert main([]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "causalot" in capsys.readouterr().out


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "causalot", "example",
                           "brownian", "--step", "5", "--out", "/tmp/cli_m"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert '"config"' in proc.stdout

import json
import math

import pytest
from click.testing import CliRunner

from indicatorlab.cli import main
from indicatorlab.measures import AngularMeasure

PI = math.pi


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args, **kwargs):
    return runner.invoke(main, list(args), obj={}, catch_exceptions=False, **kwargs)


class TestSigmaCommand:
    def test_example3_json(self, runner):
        res = invoke(runner, "sigma", "--measure", "fixture:example3", "--rho", "2")
        assert res.exit_code == 0
        data = json.loads(res.output)
        assert data["sigma_z"] == pytest.approx(3.6276, abs=1e-3)
        assert data["equality"] is False
        assert data["sigma_u"][0] == pytest.approx(PI, abs=1e-3)
        assert data["sigma_u"][1] == pytest.approx(PI, abs=1e-3)

    def test_table_format(self, runner):
        res = invoke(runner, "sigma", "--measure", "fixture:example1",
                     "--param", "n=6", "--rho", "2", "--report", "table")
        assert res.exit_code == 0
        assert "sigma_z" in res.output
        assert "True" in res.output

    def test_measure_file(self, runner, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"atoms": [{"theta": PI, "mass": 1.0}]}))
        res = invoke(runner, "sigma", "--measure", str(path), "--rho", "0.75")
        data = json.loads(res.output)
        assert data["sigma_z"] == pytest.approx(PI * math.sqrt(2), rel=1e-6)


class TestIndicatorCommand:
    def test_csv_output(self, runner, tmp_path):
        out = tmp_path / "h.csv"
        res = invoke(runner, "indicator", "--measure", "fixture:example1",
                     "--rho", "2", "--param", "n=4", "--grid", "64",
                     "--out", str(out))
        assert res.exit_code == 0
        lines = out.read_text().splitlines()
        comments = [l for l in lines if l.startswith("#")]
        assert any("rho" in c for c in comments)
        assert any("total_mass" in c for c in comments)
        assert any("rho_moment" in c for c in comments)
        rows = [l for l in lines if "," in l and not l.startswith("#")][1:]
        assert len(rows) == 64
        values = [float(r.split(",")[1]) for r in rows]
        assert max(values) == pytest.approx(PI / 4, abs=5e-3)

    def test_moment_violation_exit_code(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"atoms": [{"theta": 0.0, "mass": 1.0}]}))
        res = invoke(runner, "indicator", "--measure", str(path), "--rho", "2")
        assert res.exit_code == 2

    def test_grid_env_override(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("INDICATORLAB_GRID", "128")
        out = tmp_path / "h.csv"
        res = invoke(runner, "indicator", "--measure", "fixture:example3",
                     "--rho", "2", "--out", str(out))
        assert res.exit_code == 0
        rows = [l for l in out.read_text().splitlines()
                if "," in l and not l.startswith("#")][1:]
        assert len(rows) == 128


class TestBalanceCommand:
    def test_example3(self, runner):
        res = invoke(runner, "balance", "--measure", "fixture:example3", "--rho", "2")
        data = json.loads(res.output)
        assert data["balanced"] is True
        assert data["locally_balanced"] is False
        assert data["circumradius"] == pytest.approx(3.6276, abs=1e-3)


class TestBoundsCommand:
    def test_values(self, runner):
        res = invoke(runner, "bounds", "--theorem", "7", "--rho", "2")
        data = json.loads(res.output)
        assert data["lower"] == pytest.approx(0.63662, abs=1e-5)
        assert data["upper"] == 2.0

    def test_emit_extremals_round_trip(self, runner, tmp_path):
        res = invoke(runner, "bounds", "--theorem", "als1", "--rho", "2",
                     "--emit-extremals", str(tmp_path))
        assert res.exit_code == 0
        written = AngularMeasure.loads((tmp_path / "lower_measure.json").read_text())
        from indicatorlab.density import saturated_density_range
        from indicatorlab.measures import Order
        expected = saturated_density_range(Order(2.0), resolution=128).lower_measure
        assert written.atoms == expected.atoms
        assert written.pieces == expected.pieces
        assert (tmp_path / "h_star.csv").exists()
        assert (tmp_path / "upper_measure.json").exists()


class TestRandomizePipeline:
    def test_randomize_and_verify(self, runner, tmp_path):
        pts = tmp_path / "points.csv"
        res = invoke(runner, "randomize", "--measure", "fixture:example3",
                     "--rho", "2", "--density", "1.0", "--count", "5000",
                     "--seed", "7", "--out", str(pts))
        assert res.exit_code == 0
        rows = [l for l in pts.read_text().splitlines()
                if "," in l and not l.startswith("#")][1:]
        assert len(rows) == 5000

        arcs = tmp_path / "arcs.json"
        arcs.write_text(json.dumps({"arcs": [[-0.1, 0.1], [0.9, 1.2]]}))
        res2 = invoke(runner, "verify-density", "--points", str(pts),
                      "--arcs", str(arcs), "--checkpoints", "30,60",
                      "--measure", "fixture:example3", "--rho", "2",
                      "--density", "1.0")
        assert res2.exit_code == 0
        lines = res2.output.strip().splitlines()
        assert lines[0] == "R,alpha,beta,ratio,predicted,deviation"
        assert len(lines) == 5

    def test_stable_across_runs(self, runner, tmp_path):
        outputs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            invoke(runner, "randomize", "--measure", "fixture:example3",
                   "--rho", "2", "--density", "1.0", "--count", "100",
                   "--seed", "3", "--out", str(out))
            outputs.append(out.read_text())
        assert outputs[0] == outputs[1]


class TestClassifyCommand:
    def test_uniqueness_verdict(self, runner):
        res = invoke(runner, "classify", "--measure", "fixture:example3",
                     "--rho", "2", "--density", "1.0", "--normalize")
        data = json.loads(res.output)
        assert data["label"] == "as_uniqueness"

    def test_mass_error_exit_code(self, runner):
        res = invoke(runner, "classify", "--measure", "fixture:example3",
                     "--rho", "2", "--density", "1.0")
        assert res.exit_code == 2


class TestFixturesCommand:
    def test_list(self, runner):
        res = invoke(runner, "fixtures", "list")
        data = json.loads(res.output)
        assert any(f["name"] == "theorem7_star" for f in data["fixtures"])

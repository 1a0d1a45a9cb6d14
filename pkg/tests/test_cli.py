"""Command-line surface: subcommands, exit codes, output documents."""

import json
import subprocess
import sys

import pytest

from affineswarm.cli import main
from affineswarm.scenario import default_scenario_text


@pytest.fixture()
def default_path(tmp_path):
    path = tmp_path / "default.json"
    path.write_text(default_scenario_text())
    return str(path)


@pytest.fixture()
def fast_path(tmp_path):
    # Default layout and schedule, but coarse integration and a short hold.
    doc = json.loads(default_scenario_text())
    doc["sim"]["dt"] = 0.01
    doc["sim"]["duration"] = 32.0
    path = tmp_path / "fast.json"
    path.write_text(json.dumps(doc))
    return str(path)


class TestCheck:
    def test_default_passes(self, default_path, capsys):
        assert main(["check", default_path]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["d_min"] == 0.5
        assert doc["lambda_min_bound"] == pytest.approx(0.3, abs=1e-12)
        assert doc["min_strain_observed"] == 0.5
        assert doc["pass"] is True
        assert doc["violations"] == []

    def test_unsafe_schedule_fails_with_interval(self, tmp_path, capsys):
        doc = json.loads(default_scenario_text())
        doc["phases"][0]["end"]["lambda1"] = 0.2
        doc["phases"][0]["end"]["lambda2"] = 0.2
        doc["phases"][1]["start"]["lambda1"] = 0.2
        doc["phases"][1]["start"]["lambda2"] = 0.2
        doc["phases"][1]["end"]["lambda1"] = 0.2
        doc["phases"][1]["end"]["lambda2"] = 0.2
        doc["phases"][2]["start"]["lambda1"] = 0.2
        doc["phases"][2]["start"]["lambda2"] = 0.2
        path = tmp_path / "unsafe.json"
        path.write_text(json.dumps(doc))
        assert main(["check", str(path)]) == 1
        out = json.loads(capsys.readouterr().out)
        assert out["pass"] is False
        assert out["violations"]
        assert out["violations"][0]["t_start"] > 0.0


class TestGraph:
    def test_default_emits_matrices(self, default_path, capsys):
        assert main(["graph", default_path]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["agent_order"] == ["cf1", "cf5", "cf6", "cf2", "cf3", "cf4"]
        assert doc["w"]["cf2"] == [0.5, 0.25, 0.25]
        assert doc["spectrum"]["ok"] is True
        assert doc["spectrum"]["max_real_part"] < 0.0
        assert doc["spectrum"]["h_deviation"] <= 1e-9

    def test_degenerate_graph_is_validation_failure(self, tmp_path, capsys):
        doc = json.loads(default_scenario_text())
        doc["graph"]["cf3"] = ["cf2", "cf4", "cf5"]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        assert main(["graph", str(path)]) == 1
        assert "containment" in capsys.readouterr().err


class TestPlan:
    def test_writes_leader_csv(self, default_path, tmp_path):
        out = tmp_path / "plan.csv"
        assert main(["plan", default_path, "--out", str(out)]) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "t,agent_id,x_d,y_d,z_d"
        assert len(lines) == 1 + 3 * 3001  # 30 s at 100 Hz, inclusive
        first = lines[1].split(",")
        assert first[:2] == ["0", "cf1"]
        assert first[2:] == ["0", "0.75", "1"]


class TestSimulate:
    def test_fast_run_bundle(self, fast_path, tmp_path, capsys):
        out = tmp_path / "bundle"
        assert main(["simulate", fast_path, "--out", str(out)]) == 0
        assert (out / "manifest.json").exists()
        assert (out / "metrics.json").exists()
        csvs = sorted(p.name for p in out.glob("trace_*.csv"))
        assert len(csvs) == 6
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["safety_pass"] is True
        assert metrics["converged"] is True

    def test_scenario_flag_alias(self, fast_path, tmp_path):
        out = tmp_path / "bundle2"
        assert main(["simulate", "--scenario", fast_path, "--out", str(out)]) == 0

    def test_missing_scenario_is_usage_error(self, capsys):
        assert main(["simulate"]) == 2

    def test_override_flags_change_params(self, fast_path, tmp_path):
        out = tmp_path / "bundle3"
        assert (
            main(["simulate", fast_path, "--out", str(out), "--duration", "31.0"])
            == 0
        )
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["scenario"]["sim"]["duration"] == 31.0

    def test_unsafe_schedule_blocked_then_skipped(self, tmp_path):
        doc = json.loads(default_scenario_text())
        doc["phases"] = [doc["phases"][0]]
        doc["phases"][0]["end"]["lambda1"] = 0.2
        doc["phases"][0]["end"]["lambda2"] = 0.2
        doc["translation"]["tf"] = 10.0
        doc["translation"]["end"] = [0.5, 0.0]
        doc["sim"]["dt"] = 0.01
        doc["sim"]["duration"] = 11.0
        path = tmp_path / "unsafe.json"
        path.write_text(json.dumps(doc))
        assert main(["simulate", str(path), "--out", str(tmp_path / "x")]) == 1
        assert (
            main(
                [
                    "simulate",
                    str(path),
                    "--out",
                    str(tmp_path / "y"),
                    "--skip-safety-check",
                ]
            )
            == 0
        )

    def test_env_var_default_out(self, fast_path, tmp_path, monkeypatch):
        monkeypatch.setenv("AFFINESWARM_OUT", str(tmp_path / "envroot"))
        monkeypatch.chdir(tmp_path)
        assert main(["simulate", fast_path]) == 0
        assert (tmp_path / "envroot" / "default" / "manifest.json").exists()


class TestValidate:
    def test_validate_existing_bundle(self, fast_path, tmp_path, capsys):
        out = tmp_path / "bundle"
        assert main(["simulate", fast_path, "--out", str(out)]) == 0
        capsys.readouterr()
        assert main(["validate", str(out)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["safety_pass"] is True
        assert doc["converged"] is True
        assert doc["min_corridor_clearance"] > 0.0

    def test_missing_bundle_is_parse_error(self, tmp_path):
        assert main(["validate", str(tmp_path / "nope")]) == 2


class TestUsage:
    def test_seed_rejected(self, default_path, capsys):
        assert main(["--seed", "7", "check", default_path]) == 2
        assert "deterministic" in capsys.readouterr().err

    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_parse_error_exits_2(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["check", str(path)]) == 2

    def test_module_entry_point(self, default_path):
        result = subprocess.run(
            [sys.executable, "-m", "affineswarm", "check", default_path],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert json.loads(result.stdout)["pass"] is True

"""End-to-end runs of the command-line interface."""

import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "graphnls.cli"]
FAST = ["--points", "128", "--length", "20"]


def run(args, cwd, env=None):
    return subprocess.run(CLI + args, cwd=cwd, env=env,
                          capture_output=True, text=True)


class TestScan:
    def test_writes_commented_csv(self, tmp_path):
        r = run(["scan", "sesqui", "--m1", "0.5,1.0"] + FAST, tmp_path)
        assert r.returncode == 0
        text = (tmp_path / "scan_sesqui.csv").read_text()
        lines = text.splitlines()
        assert lines[0].startswith("# graphnls ")
        assert lines[1].startswith("# config: ")
        assert lines[2].startswith("# grid: h=")
        assert lines[3] == "param,closed_energy,discrete_energy,offset"
        assert len(lines) == 6

    def test_range_spec(self, tmp_path):
        r = run(["scan", "dilation", "--lambda", "0.8:1.2:5"] + FAST, tmp_path)
        assert r.returncode == 0
        rows = [l for l in (tmp_path / "scan_dilation.csv").read_text()
                .splitlines() if not l.startswith("#")]
        assert len(rows) == 6

    def test_json_format(self, tmp_path):
        r = run(["scan", "sesqui", "--m1", "1.0,2.0", "--format", "json"]
                + FAST, tmp_path)
        assert r.returncode == 0
        doc = json.loads((tmp_path / "scan_sesqui.json").read_text())
        assert doc["param_name"] == "m1"
        assert len(doc["data"]["param"]) == 2

    def test_bad_range_is_a_usage_error(self, tmp_path):
        r = run(["scan", "sesqui", "--m1", "a:b:c"] + FAST, tmp_path)
        assert r.returncode == 2
        assert "error" in r.stderr

    def test_unknown_curve_is_a_usage_error(self, tmp_path):
        r = run(["scan", "bogus"] + FAST, tmp_path)
        assert r.returncode == 2


class TestProfile:
    def test_stationary_profile(self, tmp_path):
        r = run(["profile", "stationary"] + FAST, tmp_path)
        assert r.returncode == 0
        assert (tmp_path / "profile_stationary.csv").exists()

    def test_inadmissible_masses_exit_2(self, tmp_path):
        r = run(["profile", "sesqui", "--m1", "3", "--m2", "1"] + FAST,
                tmp_path)
        assert r.returncode == 2
        assert "m2 >= 2*m1" in r.stderr

    def test_short_edge_warns_about_the_tail(self, tmp_path):
        r = run(["profile", "sesqui", "--m1", "1", "--m2", "5",
                 "--points", "64", "--length", "8"], tmp_path)
        assert r.returncode == 0
        assert "tail" in r.stderr


class TestFlow:
    def test_shift_descends_and_writes_summary(self, tmp_path):
        r = run(["flow", "--perturbation", "shift:0.01", "--max-iters", "400",
                 "--grad-tol", "1e-9"] + FAST, tmp_path)
        assert r.returncode == 0
        summary = json.loads((tmp_path / "flow_summary.json").read_text())
        assert summary["final_energy"] < summary["stationary_energy"] + 1e-2
        assert summary["gap_to_infimum"] > 0
        assert not summary["stalled"]
        assert (tmp_path / "flow_trace.csv").exists()

    def test_stall_reported_not_fatal(self, tmp_path):
        r = run(["flow", "--perturbation", "none", "--grad-tol", "0",
                 "--max-iters", "100"] + FAST, tmp_path)
        assert r.returncode == 0
        summary = json.loads((tmp_path / "flow_summary.json").read_text())
        assert summary["stalled"] is True

    def test_unknown_perturbation_exit_2(self, tmp_path):
        r = run(["flow", "--perturbation", "wiggle:0.1"] + FAST, tmp_path)
        assert r.returncode == 2


class TestEvolve:
    def test_standing_wave_summary(self, tmp_path):
        r = run(["evolve", "--initial", "stationary", "--t-final", "0.05"]
                + FAST, tmp_path)
        assert r.returncode == 0
        summary = json.loads((tmp_path / "evolve_summary.json").read_text())
        assert summary["measured_omega"] == pytest.approx(1.0, abs=5e-3)
        assert summary["mass_drift"] < 1e-12
        assert (tmp_path / "evolve_trace.csv").exists()

    def test_bad_step_split_exit_2(self, tmp_path):
        r = run(["evolve", "--dt", "0.3", "--t-final", "1.0"] + FAST,
                tmp_path)
        assert r.returncode == 2


class TestVerify:
    def test_coarse_grid_reports_honestly(self, tmp_path):
        r = run(["verify", "--points", "64", "--length", "20",
                 "--t-final", "0.1"], tmp_path)
        assert r.returncode == 1
        report = json.loads((tmp_path / "verify_report.json").read_text())
        assert report["all_passed"] is False
        assert len(report["checks"]) > 20
        names = {c["name"] for c in report["checks"]}
        assert "csv_determinism" in names
        assert "PASS" in r.stdout and "FAIL" in r.stdout


class TestConfigPlumbing:
    def test_outputs_are_deterministic(self, tmp_path):
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        args = ["scan", "sesqui", "--m1", "0.5:1.5:7"] + FAST
        assert run(args + ["--out", "a"], tmp_path).returncode == 0
        assert run(args + ["--out", "b"], tmp_path).returncode == 0
        assert ((tmp_path / "a" / "scan_sesqui.csv").read_bytes()
                == (tmp_path / "b" / "scan_sesqui.csv").read_bytes())

    def test_env_var_sets_output_dir(self, tmp_path):
        import os
        env = dict(os.environ, GRAPHNLS_OUT="envout")
        r = run(["scan", "sesqui", "--m1", "1.0"] + FAST, tmp_path, env=env)
        assert r.returncode == 0
        assert (tmp_path / "envout" / "scan_sesqui.csv").exists()

    def test_flag_beats_env_var(self, tmp_path):
        import os
        env = dict(os.environ, GRAPHNLS_OUT="envout")
        r = run(["scan", "sesqui", "--m1", "1.0", "--out", "flagout"] + FAST,
                tmp_path, env=env)
        assert r.returncode == 0
        assert (tmp_path / "flagout" / "scan_sesqui.csv").exists()
        assert not (tmp_path / "envout").exists()

    def test_config_file_and_flag_precedence(self, tmp_path):
        cfg = tmp_path / "settings.txt"
        cfg.write_text("mass = 4\npoints = 128\nlength = 20\n")
        r = run(["scan", "sesqui", "--m1", "0.5", "--config", str(cfg)],
                tmp_path)
        assert r.returncode == 0
        header = (tmp_path / "scan_sesqui.csv").read_text().splitlines()[1]
        assert "mass=4" in header
        r = run(["scan", "sesqui", "--m1", "0.5", "--config", str(cfg),
                 "--mass", "5"], tmp_path)
        assert "mass=5" in (tmp_path / "scan_sesqui.csv")\
            .read_text().splitlines()[1]

    def test_unknown_config_key_exit_2(self, tmp_path):
        cfg = tmp_path / "settings.txt"
        cfg.write_text("volume = 11\n")
        r = run(["scan", "sesqui", "--config", str(cfg)] + FAST, tmp_path)
        assert r.returncode == 2
        assert "unknown config key" in r.stderr

    def test_version_flag(self, tmp_path):
        r = run(["--version"], tmp_path)
        assert r.returncode == 0
        assert r.stdout.startswith("graphnls ")

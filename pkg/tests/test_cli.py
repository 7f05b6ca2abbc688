"""Command-line interface: subcommands, overrides, and exit codes."""

import json

import pytest

from aoisched.cli import main


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


SYMMETRIC = {
    "system": {
        "sources": [
            {"weight": 0.5, "mean": 1.0, "scv": 0.0},
            {"weight": 0.5, "mean": 1.0, "scv": 0.0},
        ]
    },
    "policies": ["rr"],
}


class TestEval:
    def test_round_robin_csv(self, tmp_path, capsys):
        cfg = write_config(tmp_path, dict(SYMMETRIC, output="out.csv"))
        assert main(["eval", "--config", cfg, "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "out.csv").read_text().splitlines()
        assert lines[0].startswith("# config_sha256=")
        assert "system_aoi" in lines[1]
        row = lines[2].split(",")
        assert float(row[lines[1].split(",").index("system_aoi")]) == 2.0

    def test_infeasible_pattern_exit_code_and_message(self, tmp_path, capsys):
        payload = dict(SYMMETRIC, policies=[{"pattern": [1, 1]}])
        cfg = write_config(tmp_path, payload)
        code = main(["eval", "--config", cfg, "--out", str(tmp_path)])
        assert code == 3
        assert "source(s) 2" in capsys.readouterr().err

    def test_config_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{nope}")
        assert main(["eval", "--config", str(path)]) == 2
        assert "config error" in capsys.readouterr().err

    def test_budget_exceeded_exit_code(self, tmp_path, capsys):
        payload = dict(
            SYMMETRIC,
            policies=["exhaustive"],
            search={"exhaustive_cap": 10, "budget": 100},
        )
        cfg = write_config(tmp_path, payload)
        assert main(["eval", "--config", cfg, "--out", str(tmp_path)]) == 4

    def test_deterministic_output_bytes(self, tmp_path):
        payload = dict(SYMMETRIC, policies=["rr", "pgaw-opt"], output="det.csv")
        cfg = write_config(tmp_path, payload)
        main(["eval", "--config", cfg, "--out", str(tmp_path / "a")])
        main(["eval", "--config", cfg, "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "det.csv").read_bytes() == (
            tmp_path / "b" / "det.csv"
        ).read_bytes()


class TestOptimize:
    def test_two_source_output(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SYMMETRIC)
        assert main(["optimize", "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert "policy: (1, 1)" in out
        assert "pattern: [1 2]" in out

    def test_worked_instance(self, tmp_path, capsys):
        payload = {
            "system": {
                "sources": [
                    {"weight": 0.8, "mean": 5.0, "scv": 1.0},
                    {"weight": 0.2, "mean": 30.0, "scv": 1.0},
                ]
            },
            "policies": [],
        }
        cfg = write_config(tmp_path, payload)
        assert main(["optimize", "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert "policy: (12, 1)" in out
        assert "32.333333" in out

    def test_insertion_kmax_flag(self, tmp_path, capsys):
        payload = {
            "system": {
                "sources": [
                    {"weight": 1 / 3, "mean": 2.0, "scv": 1.0},
                    {"weight": 1 / 3, "mean": 5.0, "scv": 1.0},
                    {"weight": 1 / 3, "mean": 8.0, "scv": 1.0},
                ]
            },
            "policies": [],
        }
        cfg = write_config(tmp_path, payload)
        assert main(["optimize", "--config", cfg, "--method", "insertion", "--kmax", "6"]) == 0
        out = capsys.readouterr().out
        ks = [int(line.split("K=")[1].split()[0]) for line in out.splitlines() if "K=" in line]
        assert ks and max(ks) <= 6

    def test_degenerate_weights_exit_code(self, tmp_path, capsys):
        payload = {
            "system": {
                "sources": [
                    {"weight": 1.0, "mean": 1.0, "scv": 1.0},
                    {"weight": 0.0, "mean": 1.0, "scv": 1.0},
                ]
            },
            "policies": [],
        }
        cfg = write_config(tmp_path, payload)
        assert main(["optimize", "--config", cfg]) == 3


class TestSimulate:
    def test_simulate_pattern(self, tmp_path):
        payload = {
            "system": {
                "sources": [
                    {"weight": 0.5, "mean": 1.0, "scv": 1.0},
                    {"weight": 0.5, "mean": 1.0, "scv": 1.0},
                ]
            },
            "policies": [{"pattern": [1, 2]}],
            "sim": {"horizon_events": 10000, "replications": 2, "seed": 9},
            "output": "sim.csv",
        }
        cfg = write_config(tmp_path, payload)
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "sim.csv").read_text().splitlines()
        assert "simulated" in lines[2]

    def test_horizon_and_replication_overrides(self, tmp_path):
        payload = {
            "system": {
                "sources": [
                    {"weight": 0.5, "mean": 1.0, "scv": 1.0},
                    {"weight": 0.5, "mean": 1.0, "scv": 1.0},
                ]
            },
            "policies": [{"pattern": [1, 2]}],
            "sim": {"horizon_events": 999999, "replications": 30, "seed": 9},
            "output": "sim.csv",
        }
        cfg = write_config(tmp_path, payload)
        code = main(
            ["simulate", "--config", cfg, "--out", str(tmp_path),
             "--horizon", "5000", "--replications", "2", "--seed", "4"]
        )
        assert code == 0
        comment = (tmp_path / "sim.csv").read_text().splitlines()[0]
        assert "seed=4" in comment


class TestReproduce:
    def test_fig2_writes_csv(self, tmp_path, capsys):
        assert main(["reproduce", "fig2", "--out", str(tmp_path)]) == 0
        path = tmp_path / "fig2.csv"
        assert path.exists()
        lines = path.read_text().splitlines()
        assert lines[1].split(",")[0] == "s2"
        assert len(lines) > 3

    def test_unknown_figure_rejected(self, capsys):
        with pytest.raises(SystemExit):
            main(["reproduce", "fig9"])

"""Configuration parsing, sweep evaluation, and CSV output."""

import json

import pytest

from aoisched import ConfigError
from aoisched.experiments import (
    config_hash,
    load_config,
    optimize_ra_sb,
    reproduce_fig2,
    reproduce_fig5,
    reproduce_fig6,
    run_eval,
    run_optimize,
    run_simulate,
    write_csv,
)
from aoisched import DistSpec, SourceSpec, SystemSpec


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload, indent=1))
    return path


BASE = {
    "system": {
        "sources": [
            {"weight": 0.5, "mean": 1.0, "scv": 0.0},
            {"weight": 0.5, "mean": 1.0, "scv": 0.0},
        ]
    },
    "policies": ["rr"],
}


class TestLoadConfig:
    def test_minimal(self, tmp_path):
        cfg = load_config(write_config(tmp_path, BASE))
        assert cfg.n_sources == 2
        assert cfg.services[0].family == "deterministic"
        assert cfg.sim.replications == 30

    def test_bad_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "system": [,]\n}')
        with pytest.raises(ConfigError, match="broken.json:2"):
            load_config(path)

    def test_missing_field_named(self, tmp_path):
        payload = {"system": {"sources": [{"weight": 1.0}]}}
        with pytest.raises(ConfigError, match="system.sources\\[0\\].*mean"):
            load_config(write_config(tmp_path, payload))

    def test_grid_must_increase(self, tmp_path):
        payload = dict(BASE, sweep={"variable": "mean:2", "grid": [2.0, 1.0]})
        with pytest.raises(ConfigError, match="strictly increasing"):
            load_config(write_config(tmp_path, payload))

    def test_unknown_sweep_variable(self, tmp_path):
        payload = dict(BASE, sweep={"variable": "snr:1", "grid": [1.0]})
        with pytest.raises(ConfigError, match="sweep.variable"):
            load_config(write_config(tmp_path, payload))

    def test_rho_sweep_requires_ra(self, tmp_path):
        payload = dict(BASE, sweep={"variable": "rho", "grid": [0.5]})
        with pytest.raises(ConfigError, match="rho sweeps need an ra block"):
            load_config(write_config(tmp_path, payload))

    def test_second_moment_alternative(self, tmp_path):
        payload = {
            "system": {
                "sources": [
                    {"weight": 0.8, "mean": 5.0, "second_moment": 50.0},
                    {"weight": 0.2, "mean": 15.0, "scv": 1.0},
                ]
            },
            "policies": ["rr"],
        }
        cfg = load_config(write_config(tmp_path, payload))
        assert cfg.services[0].family == "exponential"

    def test_unknown_policy(self, tmp_path):
        payload = dict(BASE, policies=["whittle"])
        with pytest.raises(ConfigError, match="policies\\[0\\]"):
            load_config(write_config(tmp_path, payload))


class TestRunEval:
    def test_round_robin_symmetric_deterministic(self, tmp_path):
        cfg = load_config(write_config(tmp_path, BASE))
        header, rows = run_eval(cfg)
        assert rows[0][header.index("system_aoi")] == pytest.approx(2.0)
        assert rows[0][header.index("method")] == "analytic"

    def test_two_source_optimum_beats_round_robin_on_sweep(self, tmp_path):
        payload = {
            "system": {
                "sources": [
                    {"weight": 0.8, "mean": 5.0, "scv": 1.0},
                    {"weight": 0.2, "mean": 10.0, "scv": 1.0},
                ]
            },
            "sweep": {"variable": "mean:2", "grid": [10.0, 30.0, 50.0]},
            "policies": ["rr", "cgaw-opt"],
        }
        cfg = load_config(write_config(tmp_path, payload))
        header, rows = run_eval(cfg)
        idx = header.index("system_aoi")
        by_point = {}
        for row in rows:
            by_point.setdefault(row[1], {})[row[2]] = row[idx]
        for value, results in by_point.items():
            assert results["cgaw-opt"] <= results["rr"] + 1e-12

    def test_ra_policy_rejected_for_eval(self, tmp_path):
        payload = dict(BASE, policies=["sps"])
        cfg = load_config(write_config(tmp_path, payload))
        with pytest.raises(ConfigError, match="simulation-only"):
            run_eval(cfg)

    def test_explicit_pattern_and_probs(self, tmp_path):
        payload = dict(
            BASE, policies=[{"pattern": [1, 2, 2]}, {"probs": [0.5, 0.5]}]
        )
        cfg = load_config(write_config(tmp_path, payload))
        header, rows = run_eval(cfg)
        assert len(rows) == 2


class TestRunSimulate:
    def test_pattern_simulation_row(self, tmp_path):
        payload = {
            "system": {
                "sources": [
                    {"weight": 0.5, "mean": 1.0, "scv": 1.0},
                    {"weight": 0.5, "mean": 1.0, "scv": 1.0},
                ]
            },
            "policies": [{"pattern": [1, 2]}],
            "sim": {"horizon_events": 20000, "replications": 3, "seed": 5},
        }
        cfg = load_config(write_config(tmp_path, payload))
        header, rows = run_simulate(cfg)
        aoi = rows[0][header.index("system_aoi")]
        assert aoi == pytest.approx(2.5, rel=0.05)
        assert rows[0][header.index("method")] == "simulated"

    def test_ra_simulation_row(self, tmp_path):
        payload = {
            "system": {
                "sources": [
                    {"weight": 0.8, "mean": 0.5, "scv": 1.0},
                    {"weight": 0.2, "mean": 1.0, "scv": 1.0},
                ]
            },
            "policies": ["lcfs-w", "pr"],
            "sim": {"horizon_events": 20000, "replications": 2, "seed": 5},
            "ra": {"arrival_rates": [0.5, 0.5], "policy": {"kind": "lcfs-w"}},
        }
        cfg = load_config(write_config(tmp_path, payload))
        header, rows = run_simulate(cfg)
        assert len(rows) == 2
        assert all(row[header.index("system_hw")] is not None for row in rows)


class TestRunOptimize:
    def test_two_source_defaults(self, tmp_path):
        cfg = load_config(write_config(tmp_path, BASE))
        text = run_optimize(cfg)
        assert "policy: (1, 1)" in text
        assert "pattern: [1 2]" in text

    def test_insertion_trace_respects_kmax(self, tmp_path):
        payload = {
            "system": {
                "sources": [
                    {"weight": 1 / 3, "mean": 2.0, "scv": 1.0},
                    {"weight": 1 / 3, "mean": 5.0, "scv": 1.0},
                    {"weight": 1 / 3, "mean": 9.0, "scv": 5.0},
                ]
            },
            "policies": [],
            "search": {"k_max": 6},
        }
        cfg = load_config(write_config(tmp_path, payload))
        text = run_optimize(cfg, method="insertion")
        for line in text.splitlines():
            if line.strip().startswith("K="):
                k = int(line.split("K=")[1].split()[0])
                assert k <= 6


class TestCsv:
    def test_write_and_hash_stability(self, tmp_path):
        header = ["a", "b"]
        rows = [[1.0, None], [0.5, "x"]]
        p1 = write_csv(tmp_path / "one.csv", "config_sha256=abc seed=1", header, rows)
        p2 = write_csv(tmp_path / "two.csv", "config_sha256=abc seed=1", header, rows)
        assert p1.read_bytes() == p2.read_bytes()
        text = p1.read_text()
        assert text.startswith("# config_sha256=abc seed=1\n")
        assert text.splitlines()[1] == "a,b"

    def test_config_hash_stable(self, tmp_path):
        cfg1 = load_config(write_config(tmp_path, BASE, "a.json"))
        cfg2 = load_config(write_config(tmp_path, BASE, "b.json"))
        assert config_hash(cfg1) == config_hash(cfg2)


class TestReproduce:
    def test_fig2_small_grid_shape(self):
        header, rows = reproduce_fig2(grid=(1.0, 30.0))
        assert header[0] == "s2"
        assert len(rows) == 2
        # At s2=1 both discriminants sit below the threshold: round robin.
        assert rows[0][header.index("kstar")] == 1
        aoi_cols = [header.index(c) for c in ("aoi_rr", "aoi_pgaw_star", "aoi_cgaw_star")]
        for row in rows:
            rr, pgaw, cgaw = (row[i] for i in aoi_cols)
            assert cgaw <= rr + 1e-12
            assert cgaw <= pgaw + 1e-9

    def test_fig6_small_grid_shape(self):
        header, rows = reproduce_fig6("a", grid=(1.0, 4.0), restarts=4)
        idx_is = header.index("aoi_is")
        idx_rr = header.index("aoi_rr")
        idx_pg = header.index("aoi_pgaw_star")
        for row in rows:
            assert row[idx_is] <= row[idx_rr] + 1e-12
            assert row[idx_is] <= row[idx_pg] + 1e-9

    def test_fig5_quick_smoke(self):
        header, rows = reproduce_fig5(
            "a",
            loads=(1.0,),
            horizon_events=15_000,
            replications=2,
            seed=3,
            grid_horizon_events=2_000,
            grid_replications=1,
        )
        assert [row[1] for row in rows] == ["ra-sb*", "lcfs-w", "sps", "pr"]
        sys_idx = header.index("system_aoi")
        assert all(row[sys_idx] > 0 for row in rows)


class TestOptimizeRaSb:
    def test_coarse_grid_smoke(self):
        sys = SystemSpec(
            [SourceSpec.from_scv(0.8, 0.5, 1.0), SourceSpec.from_scv(0.2, 1.0, 1.0)]
        )
        services = (DistSpec("exponential", 0.5, 1.0), DistSpec("exponential", 1.0, 1.0))
        p12, p21 = optimize_ra_sb(
            sys,
            services,
            rates=(0.67, 0.67),
            resolution=0.5,
            horizon_events=3_000,
            replications=1,
            seed=2,
        )
        assert 0.0 <= p12 <= 1.0
        assert 0.0 <= p21 <= 1.0

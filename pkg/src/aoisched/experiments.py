"""Experiment configurations, sweep evaluation, and CSV emission.

A configuration file is JSON: a system block (one weight and service law
per source), an optional sweep (variable name plus strictly increasing
grid), the policies to evaluate, and optional simulation, random-arrival,
and search settings.  Results go to CSV with a leading comment line that
records the config hash and seed, so identical inputs give bit-identical
files.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .distributions import DistSpec
from .errors import ConfigError
from .model import Pattern, SourceSpec, SystemSpec
from .openloop import ProbVector, cgaw_aoi, pgaw_aoi
from .probopt import optimize_pgaw_multi, optimize_pgaw_two
from .search import exhaustive_search, insertion_search
from .sim import LcfsW, Pr, RaSb, SimConfig, Sps, simulate_gaw, simulate_ra
from .two_source import TwoSourceOptimum, policy_to_pattern, solve_two_source

__all__ = [
    "ExperimentConfig",
    "PolicyRef",
    "load_config",
    "config_hash",
    "run_eval",
    "run_simulate",
    "run_optimize",
    "optimize_ra_sb",
    "reproduce_figure",
    "write_csv",
    "FIGURES",
]

_EVAL_POLICIES = {"rr", "cgaw-opt", "pgaw-opt", "insertion", "exhaustive"}
_RA_POLICIES = {"ra-sb", "lcfs-w", "sps", "pr"}
_SWEEP_PREFIXES = ("mean", "scv", "second_moment", "weight")


@dataclass(frozen=True)
class PolicyRef:
    """A policy to evaluate: a named optimizer, an explicit pattern or
    probability vector, or a random-arrival buffer policy."""

    kind: str
    pattern: tuple[int, ...] | None = None
    probs: tuple[float, ...] | None = None
    replacement: tuple[tuple[float, ...], ...] | None = None
    primary: int | None = None
    k_star: int | None = None

    @property
    def label(self) -> str:
        return self.kind


@dataclass(frozen=True)
class SimSettings:
    horizon_events: int | None = 1_000_000
    horizon_time: float | None = None
    warmup_fraction: float = 0.1
    replications: int = 30
    seed: int = 1


@dataclass(frozen=True)
class SearchSettings:
    k_max: int | None = None
    exhaustive_cap: int = 10
    budget: int = 10**8


@dataclass(frozen=True)
class RaSettings:
    arrival_rates: tuple[float, ...]
    policy: PolicyRef


@dataclass(frozen=True)
class ExperimentConfig:
    weights: tuple[float, ...]
    services: tuple[DistSpec, ...]
    sweep_variable: str | None
    sweep_grid: tuple[float, ...]
    policies: tuple[PolicyRef, ...]
    sim: SimSettings
    search: SearchSettings
    ra: RaSettings | None
    output: str
    raw: dict

    @property
    def n_sources(self) -> int:
        return len(self.weights)

    def system(self) -> SystemSpec:
        return SystemSpec(
            d.to_source_spec(w) for w, d in zip(self.weights, self.services)
        )


def _fail(path: str, message: str) -> None:
    raise ConfigError(f"{path}: {message}")


def _require(data: dict, key: str, where: str) -> Any:
    if key not in data:
        _fail(where, f"missing required field {key!r}")
    return data[key]


def _parse_source(data: Any, where: str) -> tuple[float, DistSpec]:
    if not isinstance(data, dict):
        _fail(where, "each source must be an object")
    weight = _require(data, "weight", where)
    mean = _require(data, "mean", where)
    if not isinstance(weight, (int, float)) or not isinstance(mean, (int, float)):
        _fail(where, "weight and mean must be numbers")
    if "scv" in data and "second_moment" in data:
        _fail(where, "give scv or second_moment, not both")
    if "second_moment" in data:
        scv = float(data["second_moment"]) / float(mean) ** 2 - 1.0
    else:
        scv = float(data.get("scv", 1.0))
    family = data.get("family")
    try:
        if family is None:
            dist = DistSpec.from_scv(float(mean), scv)
        else:
            dist = DistSpec(str(family), float(mean), scv)
    except ValueError as exc:
        _fail(where, str(exc))
    return float(weight), dist


def _parse_policy(data: Any, where: str) -> PolicyRef:
    if isinstance(data, str):
        kind = data
        if kind not in _EVAL_POLICIES and kind not in _RA_POLICIES:
            _fail(where, f"unknown policy {kind!r}")
        if kind == "ra-sb":
            _fail(where, "ra-sb needs an object with a replacement matrix")
        return PolicyRef(kind=kind)
    if not isinstance(data, dict):
        _fail(where, "policy must be a string or an object")
    if "pattern" in data:
        ent = data["pattern"]
        if not isinstance(ent, list) or not all(isinstance(e, int) for e in ent):
            _fail(where, "pattern must be a list of integers")
        return PolicyRef(kind="pattern", pattern=tuple(ent))
    if "probs" in data:
        pv = data["probs"]
        if not isinstance(pv, list) or not all(isinstance(p, (int, float)) for p in pv):
            _fail(where, "probs must be a list of numbers")
        return PolicyRef(kind="probs", probs=tuple(float(p) for p in pv))
    kind = data.get("kind")
    if kind == "ra-sb":
        matrix = _require(data, "replacement", where)
        try:
            rows = tuple(tuple(float(x) for x in row) for row in matrix)
        except TypeError:
            _fail(where, "replacement must be a matrix of numbers")
        return PolicyRef(kind="ra-sb", replacement=rows)
    if kind == "pr":
        return PolicyRef(
            kind="pr",
            primary=data.get("primary"),
            k_star=data.get("k_star"),
        )
    if kind in ("lcfs-w", "sps"):
        return PolicyRef(kind=kind)
    _fail(where, f"unrecognized policy object {data!r}")


def _parse_sweep(data: Any, n_sources: int) -> tuple[str, tuple[float, ...]]:
    where = "sweep"
    if not isinstance(data, dict):
        _fail(where, "sweep must be an object")
    variable = str(_require(data, "variable", where))
    grid_raw = _require(data, "grid", where)
    if not isinstance(grid_raw, list) or not grid_raw:
        _fail(where + ".grid", "grid must be a nonempty list")
    if not all(isinstance(g, (int, float)) for g in grid_raw):
        _fail(where + ".grid", "grid entries must be numbers")
    grid = tuple(float(g) for g in grid_raw)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        _fail(where + ".grid", "grid must be strictly increasing")
    if variable == "rho":
        return variable, grid
    parts = variable.split(":")
    if len(parts) != 2 or parts[0] not in _SWEEP_PREFIXES:
        _fail(
            where + ".variable",
            f"expected rho or one of {_SWEEP_PREFIXES} with :<source>, got {variable!r}",
        )
    try:
        idx = int(parts[1])
    except ValueError:
        _fail(where + ".variable", f"source index {parts[1]!r} is not an integer")
    if not 1 <= idx <= n_sources:
        _fail(where + ".variable", f"source index {idx} out of range 1..{n_sources}")
    return variable, grid


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate an experiment configuration file.

    Raises
    ------
    ConfigError
        With file, line, and field diagnostics for parse and schema errors.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        _fail(str(path), "top level must be an object")

    system = _require(raw, "system", "system")
    sources_raw = _require(system, "sources", "system.sources")
    if not isinstance(sources_raw, list) or not sources_raw:
        _fail("system.sources", "must be a nonempty list")
    weights = []
    services = []
    for i, src in enumerate(sources_raw):
        w, d = _parse_source(src, f"system.sources[{i}]")
        weights.append(w)
        services.append(d)
    n = len(weights)

    sweep_variable: str | None = None
    sweep_grid: tuple[float, ...] = ()
    if "sweep" in raw and raw["sweep"] is not None:
        sweep_variable, sweep_grid = _parse_sweep(raw["sweep"], n)

    policies = tuple(
        _parse_policy(p, f"policies[{i}]") for i, p in enumerate(raw.get("policies", []))
    )

    sim_raw = raw.get("sim", {})
    if not isinstance(sim_raw, dict):
        _fail("sim", "must be an object")
    sim = SimSettings(
        horizon_events=sim_raw.get(
            "horizon_events", None if "horizon_time" in sim_raw else 1_000_000
        ),
        horizon_time=sim_raw.get("horizon_time"),
        warmup_fraction=float(sim_raw.get("warmup_fraction", 0.1)),
        replications=int(sim_raw.get("replications", 30)),
        seed=int(sim_raw.get("seed", 1)),
    )

    search_raw = raw.get("search", {})
    if not isinstance(search_raw, dict):
        _fail("search", "must be an object")
    search = SearchSettings(
        k_max=search_raw.get("k_max"),
        exhaustive_cap=int(search_raw.get("exhaustive_cap", 10)),
        budget=int(search_raw.get("budget", 10**8)),
    )

    ra = None
    if "ra" in raw and raw["ra"] is not None:
        ra_raw = raw["ra"]
        if not isinstance(ra_raw, dict):
            _fail("ra", "must be an object")
        rates_raw = _require(ra_raw, "arrival_rates", "ra.arrival_rates")
        if (
            not isinstance(rates_raw, list)
            or len(rates_raw) != n
            or not all(isinstance(r, (int, float)) and r > 0 for r in rates_raw)
        ):
            _fail("ra.arrival_rates", f"must be {n} positive numbers")
        policy = _parse_policy(_require(ra_raw, "policy", "ra.policy"), "ra.policy")
        if policy.kind not in _RA_POLICIES:
            _fail("ra.policy", f"{policy.kind!r} is not a buffer policy")
        ra = RaSettings(
            arrival_rates=tuple(float(r) for r in rates_raw), policy=policy
        )

    if sweep_variable == "rho" and ra is None:
        _fail("sweep.variable", "rho sweeps need an ra block")

    return ExperimentConfig(
        weights=tuple(weights),
        services=tuple(services),
        sweep_variable=sweep_variable,
        sweep_grid=sweep_grid,
        policies=policies,
        sim=sim,
        search=search,
        ra=ra,
        output=str(raw.get("output", "results.csv")),
        raw=raw,
    )


def config_hash(cfg: ExperimentConfig) -> str:
    """Stable short hash of the raw configuration content."""
    canon = json.dumps(cfg.raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _swept(cfg: ExperimentConfig, value: float | None) -> ExperimentConfig:
    """Configuration with the sweep variable set to ``value``."""
    if value is None or cfg.sweep_variable is None:
        return cfg
    var = cfg.sweep_variable
    if var == "rho":
        base = np.asarray(cfg.ra.arrival_rates)
        means = np.array([d.mean for d in cfg.services])
        scale = value / float(np.dot(base, means))
        rates = tuple(float(r * scale) for r in base)
        return replace(cfg, ra=replace(cfg.ra, arrival_rates=rates))
    name, idx_str = var.split(":")
    i = int(idx_str) - 1
    services = list(cfg.services)
    weights = list(cfg.weights)
    old = services[i]
    if name == "mean":
        services[i] = DistSpec(old.family, float(value), old.scv)
    elif name == "scv":
        services[i] = DistSpec.from_scv(old.mean, float(value))
    elif name == "second_moment":
        scv = float(value) / old.mean**2 - 1.0
        services[i] = DistSpec.from_scv(old.mean, scv)
    elif name == "weight":
        weights[i] = float(value)
    return replace(cfg, services=tuple(services), weights=tuple(weights))


def _fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(
    path: str | Path, comment: str, header: Sequence[str], rows: Sequence[Sequence[Any]]
) -> Path:
    """Write rows to CSV with a leading comment line and a header row."""
    path = Path(path)
    lines = [f"# {comment}", ",".join(header)]
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")
    return path


def _pattern_str(pattern: Pattern) -> str:
    return "[" + " ".join(str(e) for e in pattern.entries) + "]"


def _probs_str(p: ProbVector) -> str:
    return "[" + " ".join(f"{x:.6f}" for x in p.probs) + "]"


def _eval_policy_analytic(
    ref: PolicyRef, cfg: ExperimentConfig, sys: SystemSpec
) -> tuple[str, Any]:
    """Analytic evaluation of a generate-at-will policy; returns the detail
    string and the report."""
    n = sys.n_sources
    if ref.kind == "rr":
        pattern = Pattern(range(1, n + 1))
        return _pattern_str(pattern), cgaw_aoi(pattern, sys)
    if ref.kind == "pattern":
        pattern = Pattern(ref.pattern)
        return _pattern_str(pattern), cgaw_aoi(pattern, sys)
    if ref.kind == "probs":
        pv = ProbVector(ref.probs)
        return _probs_str(pv), pgaw_aoi(pv, sys)
    if ref.kind == "cgaw-opt":
        res = solve_two_source(sys)
        pattern = policy_to_pattern(res.policy)
        return _pattern_str(pattern), cgaw_aoi(pattern, sys)
    if ref.kind == "pgaw-opt":
        if n == 2:
            pv, _ = optimize_pgaw_two(sys)
        else:
            pv, _ = optimize_pgaw_multi(sys, seed=cfg.sim.seed)
        return _probs_str(pv), pgaw_aoi(pv, sys)
    if ref.kind == "insertion":
        pattern, _ = insertion_search(sys, k_max=cfg.search.k_max)
        return _pattern_str(pattern), cgaw_aoi(pattern, sys)
    if ref.kind == "exhaustive":
        pattern, _ = exhaustive_search(
            sys, cfg.search.exhaustive_cap, budget=cfg.search.budget
        )
        return _pattern_str(pattern), cgaw_aoi(pattern, sys)
    raise ConfigError(f"policy {ref.kind!r} cannot be evaluated analytically")


def _result_header(n: int) -> list[str]:
    cols = ["sweep_variable", "sweep_value", "policy", "detail", "method"]
    for i in range(1, n + 1):
        cols += [f"aoi{i}", f"hw{i}"]
    cols += ["system_aoi", "system_hw"]
    return cols


def _report_row(
    cfg: ExperimentConfig, value: float | None, label: str, detail: str, report
) -> list[Any]:
    row: list[Any] = [
        cfg.sweep_variable or "",
        value,
        label,
        detail,
        report.method,
    ]
    for s in report.per_source:
        row += [s.mean_aoi, s.half_width]
    row += [report.system_aoi, report.system_half_width]
    return row


def run_eval(cfg: ExperimentConfig) -> tuple[list[str], list[list[Any]]]:
    """Analytic evaluation of every configured policy at every sweep point."""
    for ref in cfg.policies:
        if ref.kind in _RA_POLICIES:
            raise ConfigError(
                f"policy {ref.kind!r} is simulation-only, use the simulate command"
            )
    rows: list[list[Any]] = []
    points: Sequence[float | None] = cfg.sweep_grid or (None,)
    for value in points:
        point = _swept(cfg, value)
        sys = point.system()
        for ref in cfg.policies:
            detail, report = _eval_policy_analytic(ref, point, sys)
            rows.append(_report_row(cfg, value, ref.label, detail, report))
    return _result_header(cfg.n_sources), rows


def _ra_policy_object(ref: PolicyRef, sys: SystemSpec):
    if ref.kind == "lcfs-w":
        return LcfsW()
    if ref.kind == "sps":
        return Sps()
    if ref.kind == "ra-sb":
        return RaSb(ref.replacement)
    if ref.kind == "pr":
        if ref.primary is not None and ref.k_star is not None:
            return Pr(primary=ref.primary, k_star=ref.k_star)
        res = solve_two_source(sys)
        primary, k_star = _pr_parameters(res)
        return Pr(primary=primary, k_star=k_star)
    raise ConfigError(f"policy {ref.kind!r} is not a buffer policy")


def _pr_parameters(res: TwoSourceOptimum) -> tuple[int, int]:
    """The repeated source and its per-cycle count (1 when round robin)."""
    if res.policy.k1 > 1:
        return 1, res.policy.k1
    if res.policy.k2 > 1:
        return 2, res.policy.k2
    return 1, 1


def _sim_config(
    cfg: ExperimentConfig,
    seed: int,
    pattern: Pattern | None = None,
    probs: ProbVector | None = None,
    ra_policy=None,
    rates: tuple[float, ...] | None = None,
) -> SimConfig:
    return SimConfig(
        services=cfg.services,
        pattern=pattern,
        probs=probs,
        arrival_rates=rates,
        buffer_policy=ra_policy,
        horizon_events=cfg.sim.horizon_events,
        horizon_time=cfg.sim.horizon_time,
        warmup_fraction=cfg.sim.warmup_fraction,
        seed=seed,
        replications=cfg.sim.replications,
    )


def run_simulate(cfg: ExperimentConfig) -> tuple[list[str], list[list[Any]]]:
    """Simulate every configured policy at every sweep point.

    Generate-at-will policies need an explicit pattern or probability
    vector (or a named optimizer, resolved analytically first); buffer
    policies need the ra block.
    """
    rows: list[list[Any]] = []
    points: Sequence[float | None] = cfg.sweep_grid or (None,)
    for pt_index, value in enumerate(points):
        point = _swept(cfg, value)
        sys = point.system()
        for pol_index, ref in enumerate(cfg.policies):
            seed = cfg.sim.seed + 1009 * pt_index + 31 * pol_index
            if ref.kind in _RA_POLICIES:
                if point.ra is None:
                    raise ConfigError("buffer policies need an ra block")
                policy = _ra_policy_object(ref, sys)
                sim_cfg = _sim_config(
                    point, seed, ra_policy=policy, rates=point.ra.arrival_rates
                )
                report = simulate_ra(sim_cfg, sys)
                detail = ref.kind
            else:
                if ref.kind == "probs" or ref.kind == "pgaw-opt":
                    if ref.kind == "probs":
                        pv = ProbVector(ref.probs)
                    elif sys.n_sources == 2:
                        pv, _ = optimize_pgaw_two(sys)
                    else:
                        pv, _ = optimize_pgaw_multi(sys, seed=cfg.sim.seed)
                    sim_cfg = _sim_config(point, seed, probs=pv)
                    detail = _probs_str(pv)
                else:
                    if ref.kind == "pattern":
                        pattern = Pattern(ref.pattern)
                    elif ref.kind == "rr":
                        pattern = Pattern(range(1, sys.n_sources + 1))
                    elif ref.kind == "cgaw-opt":
                        pattern = policy_to_pattern(solve_two_source(sys).policy)
                    elif ref.kind == "insertion":
                        pattern, _ = insertion_search(sys, k_max=point.search.k_max)
                    else:
                        raise ConfigError(
                            f"policy {ref.kind!r} cannot be simulated"
                        )
                    sim_cfg = _sim_config(point, seed, pattern=pattern)
                    detail = _pattern_str(pattern)
                report = simulate_gaw(sim_cfg, sys)
            rows.append(_report_row(cfg, value, ref.label, detail, report))
    return _result_header(cfg.n_sources), rows


def run_optimize(cfg: ExperimentConfig, method: str | None = None) -> str:
    """Run the requested optimizer on the configured system and render a
    plain-text report."""
    sys = cfg.system()
    if method is None:
        method = "two-source" if sys.n_sources == 2 else "insertion"
    lines: list[str] = []
    if method == "two-source":
        res = solve_two_source(sys)
        pattern = policy_to_pattern(res.policy)
        report = cgaw_aoi(pattern, sys)
        lines.append(f"policy: ({res.policy.k1}, {res.policy.k2})")
        lines.append(f"placement: {list(res.policy.placement)}")
        lines.append(f"pattern: {_pattern_str(pattern)}")
        lines.append(f"branch: {res.branch}")
        lines.append(
            "discriminants: "
            f"{res.discriminant_1:.6g}, {res.discriminant_2:.6g} "
            f"(threshold {(sys.means.sum()) ** 2:.6g})"
        )
        for s in report.per_source:
            lines.append(f"aoi source {s.source}: {s.mean_aoi:.6f}")
        lines.append(f"system aoi: {res.system_aoi:.6f}")
    elif method == "insertion":
        pattern, trace = insertion_search(sys, k_max=cfg.search.k_max)
        lines.append(f"pattern: {_pattern_str(pattern)}")
        lines.append(f"stop: {trace.terminal_reason}")
        lines.append("trace:")
        for step in trace.steps:
            lines.append(
                f"  K={step.cycle_length:4d}  system aoi={step.system_aoi:.6f}  "
                f"{_pattern_str(step.pattern)}"
            )
        report = cgaw_aoi(pattern, sys)
        lines.append(f"system aoi: {report.system_aoi:.6f}")
    elif method == "pgaw":
        if sys.n_sources == 2:
            pv, aoi = optimize_pgaw_two(sys)
        else:
            pv, aoi = optimize_pgaw_multi(sys, seed=cfg.sim.seed)
        lines.append(f"probabilities: {_probs_str(pv)}")
        lines.append(f"system aoi: {aoi:.6f}")
    else:
        raise ConfigError(f"unknown optimize method {method!r}")
    return "\n".join(lines)


def optimize_ra_sb(
    sys: SystemSpec,
    services: tuple[DistSpec, ...],
    rates: tuple[float, ...],
    resolution: float = 0.05,
    horizon_events: int = 30_000,
    replications: int = 3,
    warmup_fraction: float = 0.1,
    seed: int = 0,
) -> tuple[float, float]:
    """Grid search for the best cross-replacement probabilities of the
    probabilistic buffer policy, by simulation at every grid cell.

    Returns the (arriving-1-replaces-2, arriving-2-replaces-1) pair with
    the lowest estimated system age; ties go to the lexicographically
    smaller pair.
    """
    steps = int(round(1.0 / resolution))
    grid = [i * resolution for i in range(steps + 1)]
    best = (math.inf, 0.0, 0.0)
    for i, p12 in enumerate(grid):
        for j, p21 in enumerate(grid):
            policy = RaSb(((1.0, p12), (p21, 1.0)))
            cfg = SimConfig(
                services=services,
                arrival_rates=rates,
                buffer_policy=policy,
                horizon_events=horizon_events,
                warmup_fraction=warmup_fraction,
                seed=seed + 101 * i + j,
                replications=replications,
            )
            report = simulate_ra(cfg, sys)
            key = (report.system_aoi, p12, p21)
            if key < best:
                best = key
    return best[1], best[2]


# ----------------------------------------------------------------------
# Figure reproduction sweeps.  Output files are named by panel content:
# fig2  : system age and optimal parameters against the second source's
#         mean service time (two sources, exponential).
# fig3  : same against the second source's service second moment.
# fig5a : random arrivals, equal arrival rates, four buffer policies
#         against system load.
# fig5b : random arrivals, weight-matched arrival rates.
# fig6  : three sources against the third source's mean service time, one
#         file per service-variability panel (a, b, c).
# ----------------------------------------------------------------------

_FIG2_GRID = (1.0, 2.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0)
_FIG3_GRID = (225.0, 300.0, 450.0, 675.0, 900.0, 1350.0, 1800.0, 2250.0)
_FIG5_LOADS = (0.5, 1.0, 1.5)
_FIG6_GRID = (0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0)

FIGURES = ("fig2", "fig3", "fig5a", "fig5b", "fig6")


def _two_source_system(s1: float, q1: float, s2: float, q2: float, w1: float, w2: float) -> SystemSpec:
    return SystemSpec(
        [
            SourceSpec(weight=w1, mean_service=s1, second_moment=q1),
            SourceSpec(weight=w2, mean_service=s2, second_moment=q2),
        ]
    )


def reproduce_fig2(
    grid: Sequence[float] = _FIG2_GRID, seed: int = 1
) -> tuple[list[str], list[list[Any]]]:
    """Two exponential sources, s1 fixed at 5, weights (0.8, 0.2); sweep the
    second source's mean."""
    header = [
        "s2",
        "aoi_rr",
        "aoi_pgaw_star",
        "aoi_cgaw_star",
        "p1_star",
        "kstar_source",
        "kstar",
    ]
    rows = []
    for s2 in grid:
        sys = _two_source_system(5.0, 50.0, s2, 2.0 * s2 * s2, 0.8, 0.2)
        rr = cgaw_aoi(Pattern([1, 2]), sys).system_aoi
        pv, pgaw_star = optimize_pgaw_two(sys)
        res = solve_two_source(sys)
        primary, k_star = _pr_parameters(res)
        rows.append(
            [s2, rr, pgaw_star, res.system_aoi, pv.probs[0], primary, k_star]
        )
    return header, rows


def reproduce_fig3(
    grid: Sequence[float] = _FIG3_GRID, seed: int = 1
) -> tuple[list[str], list[list[Any]]]:
    """Exponential source 1 (mean 5), source 2 with mean 15 and swept second
    moment starting at the deterministic floor; weights (0.8, 0.2)."""
    header = ["q2", "aoi_rr", "aoi_pgaw_star", "aoi_cgaw_star", "p1_star", "k1_star"]
    rows = []
    for q2 in grid:
        sys = _two_source_system(5.0, 50.0, 15.0, q2, 0.8, 0.2)
        rr = cgaw_aoi(Pattern([1, 2]), sys).system_aoi
        pv, pgaw_star = optimize_pgaw_two(sys)
        res = solve_two_source(sys)
        rows.append([q2, rr, pgaw_star, res.system_aoi, pv.probs[0], res.policy.k1])
    return header, rows


def _fig5_rates(scenario: str, rho: float) -> tuple[float, float]:
    s = (0.5, 1.0)
    w = (0.8, 0.2)
    if scenario == "a":
        lam = rho / (s[0] + s[1])
        return lam, lam
    base = (math.sqrt(w[0] / s[0]), math.sqrt(w[1] / s[1]))
    scale = rho / (base[0] * s[0] + base[1] * s[1])
    return base[0] * scale, base[1] * scale


def reproduce_fig5(
    scenario: str,
    loads: Sequence[float] = _FIG5_LOADS,
    horizon_events: int = 1_000_000,
    replications: int = 30,
    seed: int = 1,
    grid_horizon_events: int = 30_000,
    grid_replications: int = 3,
) -> tuple[list[str], list[list[Any]]]:
    """Random arrivals with two exponential sources (means 0.5 and 1,
    weights 0.8 and 0.2) under four buffer policies, against system load.

    Scenario "a" uses equal arrival rates; scenario "b" makes each rate
    proportional to sqrt(weight / mean service time).  The probabilistic
    policy's replacement pair is grid searched by simulation per load.
    """
    if scenario not in ("a", "b"):
        raise ValueError("scenario must be 'a' or 'b'")
    services = (DistSpec("exponential", 0.5, 1.0), DistSpec("exponential", 1.0, 1.0))
    sys = _two_source_system(0.5, 0.5, 1.0, 2.0, 0.8, 0.2)
    res = solve_two_source(sys)
    primary, k_star = _pr_parameters(res)
    header = [
        "rho",
        "policy",
        "aoi1",
        "hw1",
        "aoi2",
        "hw2",
        "system_aoi",
        "system_hw",
        "p12",
        "p21",
        "kstar",
    ]
    rows = []
    for li, rho in enumerate(loads):
        rates = _fig5_rates(scenario, rho)
        p12, p21 = optimize_ra_sb(
            sys,
            services,
            rates,
            horizon_events=grid_horizon_events,
            replications=grid_replications,
            seed=seed + 7919 * li,
        )
        policies = [
            ("ra-sb*", RaSb(((1.0, p12), (p21, 1.0)))),
            ("lcfs-w", LcfsW()),
            ("sps", Sps()),
            ("pr", Pr(primary=primary, k_star=k_star)),
        ]
        for pi, (label, policy) in enumerate(policies):
            cfg = SimConfig(
                services=services,
                arrival_rates=rates,
                buffer_policy=policy,
                horizon_events=horizon_events,
                warmup_fraction=0.1,
                seed=seed + 104729 * li + 13 * pi,
                replications=replications,
            )
            report = simulate_ra(cfg, sys)
            row = [rho, label]
            for s in report.per_source:
                row += [s.mean_aoi, s.half_width]
            row += [report.system_aoi, report.system_half_width]
            row += [p12 if label == "ra-sb*" else None,
                    p21 if label == "ra-sb*" else None,
                    k_star if label == "pr" else None]
            rows.append(row)
    return header, rows


_FIG6_SCVS = {"a": (0.0, 0.0, 0.0), "b": (1.0, 1.0, 1.0), "c": (0.0, 1.0, 5.0)}


def reproduce_fig6(
    panel: str,
    grid: Sequence[float] = _FIG6_GRID,
    seed: int = 1,
    restarts: int = 16,
) -> tuple[list[str], list[list[Any]]]:
    """Three equal-weight sources with means (2, 5, swept); panels fix the
    per-source service variability: (a) all deterministic, (b) all
    exponential, (c) mixed with a high-variance third source."""
    if panel not in _FIG6_SCVS:
        raise ValueError("panel must be 'a', 'b', or 'c'")
    scvs = _FIG6_SCVS[panel]
    header = ["s3", "aoi_rr", "aoi_pgaw_star", "aoi_is", "is_cycle_length"]
    rows = []
    for s3 in grid:
        means = (2.0, 5.0, s3)
        sys = SystemSpec(
            SourceSpec.from_scv(1.0 / 3.0, m, c) for m, c in zip(means, scvs)
        )
        rr = cgaw_aoi(Pattern([1, 2, 3]), sys).system_aoi
        _, pgaw_star = optimize_pgaw_multi(sys, restarts=restarts, seed=seed)
        pattern, trace = insertion_search(sys)
        rows.append([s3, rr, pgaw_star, trace.steps[-1].system_aoi, len(pattern)])
    return header, rows


def reproduce_figure(
    figure: str,
    out_dir: str | Path = ".",
    seed: int = 1,
    horizon_events: int = 1_000_000,
    replications: int = 30,
) -> list[Path]:
    """Run one reproduction sweep and write its CSV file(s) into
    ``out_dir``; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name: str, header: list[str], rows: list[list[Any]], params: dict) -> None:
        canon = json.dumps(params, sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(canon.encode()).hexdigest()[:16]
        comment = f"config_sha256={digest} seed={seed}"
        written.append(write_csv(out_dir / f"{name}.csv", comment, header, rows))

    if figure == "fig2":
        header, rows = reproduce_fig2(seed=seed)
        emit("fig2", header, rows, {"figure": "fig2", "grid": list(_FIG2_GRID)})
    elif figure == "fig3":
        header, rows = reproduce_fig3(seed=seed)
        emit("fig3", header, rows, {"figure": "fig3", "grid": list(_FIG3_GRID)})
    elif figure in ("fig5a", "fig5b"):
        scenario = figure[-1]
        header, rows = reproduce_fig5(
            scenario,
            horizon_events=horizon_events,
            replications=replications,
            seed=seed,
        )
        emit(
            figure,
            header,
            rows,
            {
                "figure": figure,
                "loads": list(_FIG5_LOADS),
                "horizon_events": horizon_events,
                "replications": replications,
            },
        )
    elif figure == "fig6":
        for panel in ("a", "b", "c"):
            header, rows = reproduce_fig6(panel, seed=seed)
            emit(
                f"fig6{panel}",
                header,
                rows,
                {"figure": f"fig6{panel}", "grid": list(_FIG6_GRID)},
            )
    else:
        raise ConfigError(f"unknown figure {figure!r}, expected one of {FIGURES}")
    return written

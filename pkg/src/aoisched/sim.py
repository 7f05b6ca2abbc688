"""Discrete-event simulation of generate-at-will and random-arrival servers.

Generate-at-will runs reproduce the exact event sequence of a cyclic or
probabilistic scheduler, so the age integral is computed from the exact
piecewise-linear sawtooth, not from time sampling.  Random-arrival runs add
per-source Poisson arrivals and a waiting room managed by one of four
buffer policies: probabilistic cross-replacement, always-replace, one slot
per source, and a counter-based policy that imitates the optimal cyclic
schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np
from scipy.stats import norm

from .distributions import DistSpec, ServiceSampler, make_sampler
from .errors import InfeasiblePatternError, SimulationError
from .model import AoiReport, Pattern, SourceAoi, SystemSpec
from .openloop import ProbVector

__all__ = [
    "RaSb",
    "LcfsW",
    "Sps",
    "Pr",
    "BufferPolicy",
    "SimConfig",
    "pr_policy_step",
    "windowed_age_mean",
    "simulate_gaw",
    "simulate_ra",
]

_Z95 = float(norm.ppf(0.975))
_CHUNK = 1 << 14


@dataclass(frozen=True)
class RaSb:
    """Probabilistic cross-replacement: an arriving source-n packet replaces
    a buffered source-m packet with probability ``replacement[n][m]``; the
    diagonal is fixed at one (a fresher packet of the same source always
    wins)."""

    replacement: tuple[tuple[float, ...], ...]

    def __init__(self, replacement: Iterable[Iterable[float]]):
        matrix = tuple(tuple(float(x) for x in row) for row in replacement)
        n = len(matrix)
        if any(len(row) != n for row in matrix):
            raise ValueError("replacement matrix must be square")
        for i, row in enumerate(matrix):
            for j, x in enumerate(row):
                if not 0.0 <= x <= 1.0:
                    raise ValueError(f"replacement[{i}][{j}]={x} outside [0, 1]")
            if matrix[i][i] != 1.0:
                raise ValueError("self-replacement probabilities must be 1")
        object.__setattr__(self, "replacement", matrix)


@dataclass(frozen=True)
class LcfsW:
    """Always replace the waiting packet with the newest arrival."""


@dataclass(frozen=True)
class Sps:
    """One waiting slot per source; a fresher arrival overwrites its own
    slot, and on completion the server takes the earliest-arrived waiter."""


@dataclass(frozen=True)
class Pr:
    """Counter-based replacement imitating the optimal two-source cyclic
    schedule: the primary source gets ``k_star`` services per cycle.

    Defined for two-source systems only.
    """

    primary: int
    k_star: int

    def __post_init__(self) -> None:
        if self.primary not in (1, 2):
            raise ValueError("primary must be source 1 or 2")
        if self.k_star < 1:
            raise ValueError("k_star must be >= 1")


BufferPolicy = Union[RaSb, LcfsW, Sps, Pr]


@dataclass(frozen=True)
class SimConfig:
    """One simulation request.

    Exactly one scheduling mode must be set: ``pattern`` (cyclic
    generate-at-will), ``probs`` (probabilistic generate-at-will), or
    ``arrival_rates`` plus ``buffer_policy`` (random arrivals).  The horizon
    is either a delivery count or a simulated-time budget; the first
    ``warmup_fraction`` of it is discarded.
    """

    services: tuple[DistSpec, ...]
    pattern: Pattern | None = None
    probs: ProbVector | None = None
    arrival_rates: tuple[float, ...] | None = None
    buffer_policy: BufferPolicy | None = None
    horizon_events: int | None = None
    horizon_time: float | None = None
    warmup_fraction: float = 0.1
    seed: int = 0
    replications: int = 30

    def __post_init__(self) -> None:
        object.__setattr__(self, "services", tuple(self.services))
        if self.arrival_rates is not None:
            object.__setattr__(self, "arrival_rates", tuple(self.arrival_rates))
        modes = [
            self.pattern is not None,
            self.probs is not None,
            self.arrival_rates is not None,
        ]
        if sum(modes) != 1:
            raise ValueError(
                "exactly one of pattern, probs, or arrival_rates must be set"
            )
        if (self.arrival_rates is not None) != (self.buffer_policy is not None):
            raise ValueError("arrival_rates and buffer_policy go together")
        if self.arrival_rates is not None and any(
            r <= 0.0 for r in self.arrival_rates
        ):
            raise ValueError("arrival rates must be positive")
        if (self.horizon_events is None) == (self.horizon_time is None):
            raise ValueError("set exactly one of horizon_events or horizon_time")
        if self.horizon_events is not None and self.horizon_events < 1:
            raise ValueError("horizon_events must be >= 1")
        if self.horizon_time is not None and self.horizon_time <= 0.0:
            raise ValueError("horizon_time must be positive")
        if not 0.0 <= self.warmup_fraction < 1.0:
            raise ValueError("warmup_fraction must lie in [0, 1)")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")

    @property
    def mode(self) -> str:
        if self.pattern is not None:
            return "gaw-cyclic"
        if self.probs is not None:
            return "gaw-prob"
        return "ra"


def pr_policy_step(
    policy: Pr, in_service: int, buffered: int, arriving: int, counter: int
) -> bool:
    """Replacement decision of the counter-based policy for an arrival that
    finds both the server and the buffer occupied.

    ``counter`` counts consecutive primary service starts since the last
    secondary start.  Same-source arrivals always replace (fresher packet).
    While the primary source is in service, a primary arrival replaces the
    buffered secondary packet only while the counter is inside the run
    (0 < counter < k_star); once the run is complete, a secondary arrival
    replaces the buffered primary packet instead.  While the secondary
    source is in service, a primary arrival always replaces the buffered
    secondary packet.
    """
    if arriving == buffered:
        return True
    if in_service == policy.primary:
        if arriving == policy.primary:
            return 0 < counter < policy.k_star
        return counter >= policy.k_star
    return arriving == policy.primary


def windowed_age_mean(
    delivery_times: np.ndarray,
    post_drop_ages: np.ndarray,
    generation_times: np.ndarray,
    t0: float,
    t1: float,
    initial_generation: float = 0.0,
) -> float:
    """Time-average age over [t0, t1] of a sawtooth defined by delivery
    epochs, the age value right after each drop, and the generation times
    that determine the age before the first in-window drop.

    The integral is exact: the sawtooth is piecewise linear with unit slope
    between drops.
    """
    if t1 <= t0:
        raise SimulationError("measurement window is empty")
    j0 = int(np.searchsorted(delivery_times, t0, side="right"))
    j1 = int(np.searchsorted(delivery_times, t1, side="right"))
    if j0 > 0:
        age_at_t0 = t0 - generation_times[j0 - 1]
    else:
        age_at_t0 = t0 - initial_generation
    bounds = np.concatenate(([t0], delivery_times[j0:j1], [t1]))
    start_ages = np.concatenate(([age_at_t0], post_drop_ages[j0:j1]))
    deltas = np.diff(bounds)
    area = float(np.dot(start_ages, deltas) + 0.5 * np.dot(deltas, deltas))
    return area / (t1 - t0)


def _replication_seeds(seed: int, replications: int) -> list[np.random.Generator]:
    """Independent per-replication generators spawned from the master seed
    (numpy SeedSequence spawning)."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(replications)]


def _aggregate(per_rep: np.ndarray, sys: SystemSpec) -> AoiReport:
    """Across-replication mean and 95% half-widths (normal approximation)."""
    reps = per_rep.shape[0]
    means = per_rep.mean(axis=0)
    sys_per_rep = per_rep @ sys.weights
    if reps >= 2:
        hw = _Z95 * per_rep.std(axis=0, ddof=1) / math.sqrt(reps)
        sys_hw = float(_Z95 * sys_per_rep.std(ddof=1) / math.sqrt(reps))
        per = tuple(
            SourceAoi(source=n + 1, mean_aoi=float(means[n]), half_width=float(hw[n]))
            for n in range(sys.n_sources)
        )
    else:
        sys_hw = None
        per = tuple(
            SourceAoi(source=n + 1, mean_aoi=float(means[n])) for n in range(sys.n_sources)
        )
    return AoiReport(
        per_source=per,
        system_aoi=float(sys_per_rep.mean()),
        method="simulated",
        system_half_width=sys_hw,
    )


def _draw_services_for_slots(
    slots: np.ndarray, samplers: list[ServiceSampler], n: int
) -> np.ndarray:
    services = np.empty(len(slots))
    for s in range(n):
        mask = slots == s
        count = int(mask.sum())
        if count:
            services[mask] = samplers[s].draw(count)
    return services


def _gaw_slot_stream(
    cfg: SimConfig, n: int, rng: np.random.Generator, count: int, offset: int = 0
) -> np.ndarray:
    """Slots ``offset .. offset + count`` of the scheduling sequence."""
    if cfg.pattern is not None:
        base = cfg.pattern.as_array()
        return base[(offset + np.arange(count)) % len(base)]
    p = cfg.probs.as_array()
    return rng.choice(n, size=count, p=p)


def _gaw_replication(
    cfg: SimConfig, sys: SystemSpec, rng: np.random.Generator
) -> np.ndarray:
    n = sys.n_sources
    samplers = [make_sampler(spec, rng) for spec in cfg.services]
    if cfg.horizon_events is not None:
        slots = _gaw_slot_stream(cfg, n, rng, cfg.horizon_events)
        services = _draw_services_for_slots(slots, samplers, n)
        times = np.cumsum(services)
        t1 = float(times[-1])
    else:
        mean_slot = float(np.mean([s.mean for s in cfg.services]))
        need = int(cfg.horizon_time / mean_slot * 1.1) + 64
        slots = np.empty(0, dtype=np.int64)
        services = np.empty(0)
        total = 0.0
        while total < cfg.horizon_time:
            extra_slots = _gaw_slot_stream(cfg, n, rng, need, offset=len(slots))
            extra_services = _draw_services_for_slots(extra_slots, samplers, n)
            slots = np.concatenate([slots, extra_slots])
            services = np.concatenate([services, extra_services])
            total += float(extra_services.sum())
            need = max(need // 4, 64)
        times = np.cumsum(services)
        t1 = float(cfg.horizon_time)
        keep = times <= t1
        slots, services, times = slots[keep], services[keep], times[keep]
    t0 = cfg.warmup_fraction * t1

    means = np.empty(n)
    for s in range(n):
        idx = np.flatnonzero(slots == s)
        deliveries = times[idx]
        in_window = (deliveries > t0) & (deliveries <= t1)
        if not np.any(in_window):
            raise SimulationError(
                f"horizon too short: no post-warmup delivery for source {s + 1}"
            )
        ages = services[idx]
        means[s] = windowed_age_mean(deliveries, ages, deliveries - ages, t0, t1)
    return means


def simulate_gaw(cfg: SimConfig, sys: SystemSpec) -> AoiReport:
    """Simulate a generate-at-will scheduler and report per-source and
    system age estimates with 95% confidence half-widths.

    The configuration's service laws drive the dynamics; the system spec
    supplies the weights.  Identical (config, seed) pairs give bit-identical
    reports.
    """
    if cfg.mode == "ra":
        raise ValueError("config is in random-arrival mode, use simulate_ra")
    if len(cfg.services) != sys.n_sources:
        raise ValueError("one service law per source is required")
    if cfg.pattern is not None and not cfg.pattern.is_feasible_for(sys.n_sources):
        counts = cfg.pattern.appearance_counts(sys.n_sources)
        missing = ", ".join(str(i + 1) for i in range(sys.n_sources) if counts[i] == 0)
        raise InfeasiblePatternError(f"pattern never serves source(s) {missing}")
    if cfg.probs is not None and len(cfg.probs) != sys.n_sources:
        raise ValueError("probability vector length must match the system")
    rngs = _replication_seeds(cfg.seed, cfg.replications)
    per_rep = np.vstack([_gaw_replication(cfg, sys, rng) for rng in rngs])
    return _aggregate(per_rep, sys)


def _ra_replication(
    cfg: SimConfig, sys: SystemSpec, rng: np.random.Generator
) -> np.ndarray:
    n = sys.n_sources
    samplers = [make_sampler(spec, rng) for spec in cfg.services]
    policy = cfg.buffer_policy
    if isinstance(policy, LcfsW):
        policy = RaSb(tuple(tuple(1.0 for _ in range(n)) for _ in range(n)))
    mode_sps = isinstance(policy, Sps)
    mode_pr = isinstance(policy, Pr)
    matrix = policy.replacement if isinstance(policy, RaSb) else None
    if mode_pr:
        pr_primary = policy.primary - 1
        pr_k_star = policy.k_star

    lam_total = float(sum(cfg.arrival_rates))
    mean_gap = 1.0 / lam_total
    cum = np.cumsum(np.asarray(cfg.arrival_rates) / lam_total)

    # Chunked pre-draws, consumed through plain list indexing: the event loop
    # is pure Python and dominates the run time.
    gaps = rng.exponential(mean_gap, _CHUNK).tolist()
    gi = 0
    srcs = np.searchsorted(cum, rng.random(_CHUNK)).tolist()
    si = 0
    service_bufs = [samplers[s].draw(_CHUNK).tolist() for s in range(n)]
    service_idx = [0] * n
    uniforms = rng.random(_CHUNK).tolist() if matrix is not None else []
    ui = 0

    event_mode = cfg.horizon_events is not None
    if event_mode:
        target = cfg.horizon_events
        warm_target = math.ceil(cfg.warmup_fraction * target)
        t0 = 0.0
        t1 = math.inf
        measuring = warm_target == 0
    else:
        target = -1
        warm_target = -1
        t0 = cfg.warmup_fraction * cfg.horizon_time
        t1 = cfg.horizon_time
        measuring = True  # clipping below confines the integral to [t0, t1]

    inf = math.inf
    t = 0.0
    next_arrival = gaps[0]
    gi = 1
    serving = -1
    serving_gen = 0.0
    completion = inf
    buf_src = -1
    buf_gen = 0.0
    sps_wait = [-1.0] * n
    counter = 0
    deliveries = 0
    last_gen = [0.0] * n
    areas = [0.0] * n
    last_t = [0.0] * n
    last_age = [0.0] * n
    end_time = 0.0

    while True:
        if completion <= next_arrival:
            if completion > t1:
                end_time = t1
                break
            t = completion
            src = serving
            deliveries += 1
            last_gen[src] = serving_gen
            if measuring:
                prev_t = last_t[src]
                lo = prev_t if prev_t > t0 else t0
                if t > lo:
                    age_lo = last_age[src] + (lo - prev_t)
                    dt = t - lo
                    areas[src] += age_lo * dt + 0.5 * dt * dt
                last_t[src] = t
                last_age[src] = t - serving_gen
            elif deliveries == warm_target:
                measuring = True
                t0 = t
                for s in range(n):
                    last_t[s] = t
                    last_age[s] = t - last_gen[s]
            if deliveries == target:
                end_time = t
                break
            # pull the next packet into service
            if mode_sps:
                pick = -1
                pick_gen = inf
                for s in range(n):
                    g = sps_wait[s]
                    if 0.0 <= g < pick_gen:
                        pick = s
                        pick_gen = g
                if pick >= 0:
                    sps_wait[pick] = -1.0
                    serving = pick
                    serving_gen = pick_gen
                    j = service_idx[pick]
                    buf = service_bufs[pick]
                    if j == len(buf):
                        buf = samplers[pick].draw(_CHUNK).tolist()
                        service_bufs[pick] = buf
                        j = 0
                    completion = t + buf[j]
                    service_idx[pick] = j + 1
                else:
                    serving = -1
                    completion = inf
            elif buf_src >= 0:
                serving = buf_src
                serving_gen = buf_gen
                j = service_idx[buf_src]
                buf = service_bufs[buf_src]
                if j == len(buf):
                    buf = samplers[buf_src].draw(_CHUNK).tolist()
                    service_bufs[buf_src] = buf
                    j = 0
                completion = t + buf[j]
                service_idx[buf_src] = j + 1
                buf_src = -1
            else:
                serving = -1
                completion = inf
            if mode_pr and serving >= 0:
                counter = counter + 1 if serving == pr_primary else 0
        else:
            if next_arrival > t1:
                end_time = t1
                break
            t = next_arrival
            if si == _CHUNK:
                srcs = np.searchsorted(cum, rng.random(_CHUNK)).tolist()
                si = 0
            src = srcs[si]
            si += 1
            if gi == _CHUNK:
                gaps = rng.exponential(mean_gap, _CHUNK).tolist()
                gi = 0
            next_arrival = t + gaps[gi]
            gi += 1
            if serving < 0:
                serving = src
                serving_gen = t
                j = service_idx[src]
                buf = service_bufs[src]
                if j == len(buf):
                    buf = samplers[src].draw(_CHUNK).tolist()
                    service_bufs[src] = buf
                    j = 0
                completion = t + buf[j]
                service_idx[src] = j + 1
                if mode_pr:
                    counter = counter + 1 if src == pr_primary else 0
            elif mode_sps:
                sps_wait[src] = t
            elif buf_src < 0:
                buf_src = src
                buf_gen = t
            elif src == buf_src:
                buf_gen = t
            elif mode_pr:
                # Same rule as pr_policy_step, inlined for speed.
                if serving == pr_primary:
                    replace = (
                        0 < counter < pr_k_star
                        if src == pr_primary
                        else counter >= pr_k_star
                    )
                else:
                    replace = src == pr_primary
                if replace:
                    buf_src = src
                    buf_gen = t
            else:
                p = matrix[src][buf_src]
                if p >= 1.0:
                    buf_src = src
                    buf_gen = t
                elif p > 0.0:
                    if ui == _CHUNK:
                        uniforms = rng.random(_CHUNK).tolist()
                        ui = 0
                    u = uniforms[ui]
                    ui += 1
                    if u < p:
                        buf_src = src
                        buf_gen = t

    if end_time <= t0 or not measuring:
        raise SimulationError("horizon too short to complete warmup")
    for s in range(n):
        lo = last_t[s] if last_t[s] > t0 else t0
        if end_time > lo:
            age_lo = last_age[s] + (lo - last_t[s])
            dt = end_time - lo
            areas[s] += age_lo * dt + 0.5 * dt * dt
    return np.asarray(areas) / (end_time - t0)


def simulate_ra(cfg: SimConfig, sys: SystemSpec) -> AoiReport:
    """Simulate a random-arrival single-waiting-room server under the
    configured buffer policy.

    Arrivals are per-source Poisson; an arrival enters service if the
    server is idle, joins the empty waiting room if not, and otherwise
    competes with the waiting packet under the policy's replacement rule.
    The age of a source drops at each delivery to the delivered packet's
    system age (its generation epoch is its arrival epoch).
    """
    if cfg.mode != "ra":
        raise ValueError("config is not in random-arrival mode")
    if len(cfg.services) != sys.n_sources:
        raise ValueError("one service law per source is required")
    if len(cfg.arrival_rates) != sys.n_sources:
        raise ValueError("one arrival rate per source is required")
    policy = cfg.buffer_policy
    if isinstance(policy, RaSb) and len(policy.replacement) != sys.n_sources:
        raise ValueError("replacement matrix size must match the system")
    if isinstance(policy, Pr) and sys.n_sources != 2:
        raise ValueError("the counter-based policy is defined for two sources")
    rngs = _replication_seeds(cfg.seed, cfg.replications)
    per_rep = np.vstack([_ra_replication(cfg, sys, rng) for rng in rngs])
    return _aggregate(per_rep, sys)

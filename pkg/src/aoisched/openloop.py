"""Exact mean age for probabilistic and cyclic open-loop schedulers.

Both schedulers are generate-at-will: the server itself triggers sampling
and transmission, either by drawing a source independently at each
scheduling instant (P-GAW, parameterized by a probability vector) or by
repeating a fixed pattern (C-GAW).  In both cases the per-source gap between
consecutive transmissions has computable first and second moments, which is
all the mean-age formula needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InfeasiblePatternError, UnboundedAgeError
from .model import (
    AoiReport,
    MomentPair,
    Pattern,
    SourceAoi,
    SystemSpec,
    mean_aoi_from_moments,
)

__all__ = [
    "ProbVector",
    "SubpatternSet",
    "pgaw_gap_moments",
    "pgaw_aoi",
    "subpatterns",
    "cgaw_gap_moments",
    "cgaw_aoi",
]

# Probabilities below this starve a source in any practical horizon; the
# resulting near-infinite ages are reported as an error, not as a big float.
_MIN_PROBABILITY = 1e-12
_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ProbVector:
    """Transmission probabilities of a work-conserving probabilistic server."""

    probs: tuple[float, ...]

    def __init__(self, probs: Iterable[float]):
        p = tuple(float(x) for x in probs)
        if len(p) == 0:
            raise ValueError("probability vector must be nonempty")
        for i, x in enumerate(p):
            if not np.isfinite(x) or x < _MIN_PROBABILITY:
                raise UnboundedAgeError(
                    f"p[{i + 1}] = {x}: every source needs a strictly positive "
                    "transmission probability"
                )
        total = sum(p)
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise ValueError(f"probabilities must sum to 1, got {total}")
        object.__setattr__(self, "probs", p)

    def __len__(self) -> int:
        return len(self.probs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)


@dataclass(frozen=True)
class SubpatternSet:
    """The gaps of one source inside a pattern, materialized as sequences.

    Entry ``parts[k]`` lists the other-source slots strictly between the
    k-th and (k+1)-st appearance of the source, in cyclic order; the last
    part wraps past the pattern end.  Back-to-back appearances produce an
    empty part.
    """

    source: int
    parts: tuple[tuple[int, ...], ...]

    def gap_moments(self, sys: SystemSpec) -> MomentPair:
        """Gap moments by direct evaluation over the materialized parts.

        This is the slow reference path; ``cgaw_gap_moments`` computes the
        same values in a single pass over the pattern.
        """
        from .model import _moments_of_entries

        means = []
        seconds = []
        for part in self.parts:
            m, v = _moments_of_entries(part, sys)
            means.append(m)
            seconds.append(v + m * m)
        return MomentPair(float(np.mean(means)), float(np.mean(seconds)))


def _check_feasible(pattern: Pattern, sys: SystemSpec) -> np.ndarray:
    counts = pattern.appearance_counts(sys.n_sources)
    missing = [str(i + 1) for i in range(sys.n_sources) if counts[i] == 0]
    if missing:
        raise InfeasiblePatternError(
            "pattern never serves source(s) " + ", ".join(missing)
        )
    return counts


def pgaw_gap_moments(p: ProbVector, sys: SystemSpec, source: int) -> MomentPair:
    """Moments of the gap between consecutive transmissions of ``source``
    under probabilistic scheduling.

    The number of other-source transmissions in a gap is geometric with
    parameter ``p[source]`` and each such transmission belongs to source m
    with probability ``p[m] / (1 - p[source])``, which gives closed forms::

        mean   = sum_{m != n} p[m] * s[m] / p[n]
        second = sum_{m != n} p[m] * q[m] / p[n]
                 + 2 * (sum_{m != n} p[m] * s[m])**2 / p[n]**2
    """
    if len(p) != sys.n_sources:
        raise ValueError("probability vector length must match the system")
    n = source - 1
    if not 0 <= n < sys.n_sources:
        raise ValueError(f"source index {source} out of range")
    pv = p.as_array()
    pn = float(pv[n])
    if pn < _MIN_PROBABILITY:
        raise UnboundedAgeError(f"p[{source}] too small, expected age unbounded")
    others = np.arange(sys.n_sources) != n
    weighted_mean = float(np.dot(pv[others], sys.means[others]))
    weighted_second = float(np.dot(pv[others], sys.second_moments[others]))
    mean = weighted_mean / pn
    second = weighted_second / pn + 2.0 * weighted_mean**2 / pn**2
    return MomentPair(mean, second)


def pgaw_aoi(p: ProbVector, sys: SystemSpec) -> AoiReport:
    """Exact per-source and weighted system age under probabilistic
    scheduling with probabilities ``p``."""
    per = []
    for n in range(1, sys.n_sources + 1):
        src = sys.sources[n - 1]
        own = MomentPair(src.mean_service, src.second_moment)
        gap = pgaw_gap_moments(p, sys, n)
        per.append(SourceAoi(source=n, mean_aoi=mean_aoi_from_moments(own, gap)))
    aois = [s.mean_aoi for s in per]
    return AoiReport(
        per_source=tuple(per),
        system_aoi=float(np.dot(sys.weights, aois)),
        method="analytic",
    )


def subpatterns(pattern: Pattern, source: int) -> SubpatternSet:
    """Materialize the cyclic gaps of ``source`` within ``pattern``.

    Raises
    ------
    InfeasiblePatternError
        If the source never appears in the pattern.
    """
    entries = pattern.entries
    positions = [i for i, e in enumerate(entries) if e == source]
    if not positions:
        raise InfeasiblePatternError(f"source {source} does not appear in pattern")
    k = len(entries)
    parts = []
    for idx, start in enumerate(positions):
        end = positions[(idx + 1) % len(positions)]
        if idx + 1 < len(positions):
            part = entries[start + 1 : end]
        else:
            part = entries[start + 1 :] + entries[:end]
        parts.append(part)
    return SubpatternSet(source=source, parts=tuple(parts))


def _gap_sums(
    positions: np.ndarray, pref_s: np.ndarray, pref_v: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-gap sums of means and variances for one source.

    ``pref_s`` and ``pref_v`` are prefix sums over the pattern tiled twice,
    so the wrap-around gap needs no special case.
    """
    starts = positions + 1
    ends = np.concatenate([positions[1:], positions[:1] + k])
    return pref_s[ends] - pref_s[starts], pref_v[ends] - pref_v[starts]


def cgaw_gap_moments(pattern: Pattern, sys: SystemSpec, source: int) -> MomentPair:
    """Gap moments of ``source`` under cyclic scheduling with ``pattern``.

    Averages the per-gap total-service moments over the source's appearances;
    an empty gap (back-to-back slots) contributes zero mean and zero second
    moment.  Single pass over the pattern.
    """
    _check_feasible(pattern, sys)
    entries0 = pattern.as_array()
    k = len(entries0)
    s_per_slot = sys.means[entries0]
    v_per_slot = sys.variances[entries0]
    pref_s = np.concatenate([[0.0], np.cumsum(np.tile(s_per_slot, 2))])
    pref_v = np.concatenate([[0.0], np.cumsum(np.tile(v_per_slot, 2))])
    positions = np.flatnonzero(entries0 == source - 1)
    gap_s, gap_v = _gap_sums(positions, pref_s, pref_v, k)
    mean = float(np.mean(gap_s))
    second = float(np.mean(gap_v + gap_s**2))
    return MomentPair(mean, second)


def _per_source_aoi_entries(
    entries0: np.ndarray,
    means: np.ndarray,
    variances: np.ndarray,
    second_moments: np.ndarray,
) -> np.ndarray:
    """Per-source mean ages of a zero-based pattern array.

    Shared fast path for ``cgaw_aoi`` and the pattern searches: one prefix
    sum over the (doubled) pattern, then vectorized per-gap sums for each
    source, for a total cost linear in sources times pattern length.
    """
    k = len(entries0)
    s_per_slot = means[entries0]
    v_per_slot = variances[entries0]
    pref_s = np.concatenate([[0.0], np.cumsum(np.tile(s_per_slot, 2))])
    pref_v = np.concatenate([[0.0], np.cumsum(np.tile(v_per_slot, 2))])
    out = np.empty(len(means))
    for n in range(len(means)):
        positions = np.flatnonzero(entries0 == n)
        gap_s, gap_v = _gap_sums(positions, pref_s, pref_v, k)
        g = float(np.mean(gap_s))
        qg = float(np.mean(gap_v + gap_s**2))
        s = means[n]
        q = second_moments[n]
        out[n] = (2.0 * s * s + 4.0 * s * g + q + qg) / (2.0 * (s + g))
    return out


def cgaw_aoi(pattern: Pattern, sys: SystemSpec) -> AoiReport:
    """Exact per-source and weighted system age under cyclic scheduling.

    Deterministic in the pattern: rotations and whole-pattern repetitions
    yield identical reports.

    Raises
    ------
    InfeasiblePatternError
        Naming the missing sources, if any never appear in the pattern.
    """
    _check_feasible(pattern, sys)
    aois = _per_source_aoi_entries(
        pattern.as_array(), sys.means, sys.variances, sys.second_moments
    )
    per = tuple(
        SourceAoi(source=n + 1, mean_aoi=float(aois[n])) for n in range(sys.n_sources)
    )
    return AoiReport(
        per_source=per,
        system_aoi=float(np.dot(sys.weights, aois)),
        method="analytic",
    )

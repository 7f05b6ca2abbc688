"""Domain types and the mean-age formula shared by every scheduler.

A status update system consists of N sources, each with a service-time law
summarized by its first two moments and a nonnegative urgency weight.  A
cyclic schedule is a fixed pattern of source indices that the server repeats
forever.  The age of a source follows a sawtooth: it drops to the service
duration at each delivery and grows with unit slope in between.  The mean
age is the ratio of the expected sawtooth area per renewal cycle to the
expected cycle length, and it depends on the service law and on the gap
between consecutive transmissions of the same source only through their
first two moments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidPatternError

__all__ = [
    "SourceSpec",
    "SystemSpec",
    "Pattern",
    "MomentPair",
    "PatternMoments",
    "SourceAoi",
    "AoiReport",
    "pattern_moments",
    "mean_aoi_from_moments",
    "system_aoi",
]

# Relative slack used when checking second_moment >= mean**2, so that values
# produced by float arithmetic on genuinely valid laws are not rejected.
_MOMENT_SLACK = 1e-9


@dataclass(frozen=True)
class SourceSpec:
    """Per-source weight and service-time moment summary.

    Parameters
    ----------
    weight : float
        Nonnegative urgency weight of the source (dimensionless).
    mean_service : float
        Mean service time, strictly positive.
    second_moment : float
        Second moment of the service time; must be >= mean_service**2.
    """

    weight: float
    mean_service: float
    second_moment: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.weight) or self.weight < 0.0:
            raise ValueError(f"weight must be finite and >= 0, got {self.weight}")
        if not np.isfinite(self.mean_service) or self.mean_service <= 0.0:
            raise ValueError(
                f"mean_service must be finite and > 0, got {self.mean_service}"
            )
        if not np.isfinite(self.second_moment) or self.second_moment <= 0.0:
            raise ValueError(
                f"second_moment must be finite and > 0, got {self.second_moment}"
            )
        lower = self.mean_service**2
        if self.second_moment < lower * (1.0 - _MOMENT_SLACK):
            raise ValueError(
                "second_moment implies negative variance: "
                f"{self.second_moment} < {lower}"
            )

    @classmethod
    def from_scv(cls, weight: float, mean: float, scv: float) -> "SourceSpec":
        """Build a spec from mean and squared coefficient of variation."""
        if scv < 0.0:
            raise ValueError(f"scv must be >= 0, got {scv}")
        return cls(weight=weight, mean_service=mean, second_moment=(1.0 + scv) * mean**2)

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean_service**2

    @property
    def scv(self) -> float:
        """Squared coefficient of variation: variance over squared mean."""
        return self.variance / self.mean_service**2


@dataclass(frozen=True)
class SystemSpec:
    """An ordered collection of sources, indexed 1..N in the public API."""

    sources: tuple[SourceSpec, ...]

    def __init__(self, sources: Iterable[SourceSpec]):
        object.__setattr__(self, "sources", tuple(sources))
        if len(self.sources) < 1:
            raise ValueError("a system needs at least one source")
        if all(src.weight == 0.0 for src in self.sources):
            raise ValueError("at least one source must have positive weight")

    @property
    def n_sources(self) -> int:
        return len(self.sources)

    @property
    def weights(self) -> np.ndarray:
        return np.array([s.weight for s in self.sources])

    @property
    def normalized_weights(self) -> np.ndarray:
        """Weights rescaled to sum to one (well defined by the invariant that
        at least one weight is positive)."""
        w = self.weights
        return w / w.sum()

    @property
    def means(self) -> np.ndarray:
        return np.array([s.mean_service for s in self.sources])

    @property
    def second_moments(self) -> np.ndarray:
        return np.array([s.second_moment for s in self.sources])

    @property
    def variances(self) -> np.ndarray:
        return np.array([s.variance for s in self.sources])

    def source(self, index: int) -> SourceSpec:
        """Return the source with 1-based index ``index``."""
        if not 1 <= index <= self.n_sources:
            raise ValueError(f"source index {index} out of range 1..{self.n_sources}")
        return self.sources[index - 1]


@dataclass(frozen=True)
class Pattern:
    """A fixed cyclic transmission sequence over 1-based source indices."""

    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int]):
        ent = tuple(int(e) for e in entries)
        if len(ent) == 0:
            raise InvalidPatternError("pattern must contain at least one entry")
        if any(e < 1 for e in ent):
            raise InvalidPatternError(f"source indices must be >= 1, got {ent}")
        object.__setattr__(self, "entries", ent)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def cycle_length(self) -> int:
        return len(self.entries)

    def appearance_counts(self, n_sources: int) -> np.ndarray:
        """Number of slots per source, as an array of length ``n_sources``."""
        counts = np.zeros(n_sources, dtype=np.int64)
        for e in self.entries:
            if e > n_sources:
                raise InvalidPatternError(
                    f"entry {e} exceeds the number of sources {n_sources}"
                )
            counts[e - 1] += 1
        return counts

    def is_feasible_for(self, n_sources: int) -> bool:
        """True when every source 1..n_sources appears at least once."""
        try:
            return bool(np.all(self.appearance_counts(n_sources) > 0))
        except InvalidPatternError:
            return False

    def rotated(self, k: int) -> "Pattern":
        """Cyclic rotation moving the entry at position ``k`` to the front."""
        k %= len(self.entries)
        return Pattern(self.entries[k:] + self.entries[:k])

    def as_array(self) -> np.ndarray:
        """Zero-based entries as an int64 array (internal computations)."""
        return np.asarray(self.entries, dtype=np.int64) - 1


@dataclass(frozen=True)
class MomentPair:
    """First and second moment of a nonnegative random duration."""

    mean: float
    second_moment: float

    def __post_init__(self) -> None:
        if self.mean < 0.0 or self.second_moment < 0.0:
            raise ValueError("moments of a duration must be nonnegative")
        lower = self.mean**2
        if self.second_moment < lower * (1.0 - _MOMENT_SLACK) - 1e-300:
            raise ValueError(
                f"second moment {self.second_moment} below squared mean {lower}"
            )

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean**2

    @property
    def scv(self) -> float:
        """Squared coefficient of variation; infinite for a zero-mean pair."""
        if self.mean == 0.0:
            return float("inf") if self.second_moment > 0.0 else 0.0
        return self.variance / self.mean**2


@dataclass(frozen=True)
class PatternMoments:
    """Moments of the total service time of one full pattern.

    ``second_moment`` is always ``variance + mean**2`` by construction.
    """

    mean: float
    variance: float
    second_moment: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "second_moment", self.variance + self.mean**2)

    def as_pair(self) -> MomentPair:
        return MomentPair(self.mean, self.second_moment)


@dataclass(frozen=True)
class SourceAoi:
    """Mean age of one source, with a confidence half-width when simulated."""

    source: int
    mean_aoi: float
    half_width: float | None = None


@dataclass(frozen=True)
class AoiReport:
    """Per-source mean ages plus the weighted system age.

    ``method`` is "analytic" for exact values and "simulated" for estimates;
    simulated reports carry 95% confidence half-widths.
    """

    per_source: tuple[SourceAoi, ...]
    system_aoi: float
    method: str
    system_half_width: float | None = None

    def mean_aois(self) -> np.ndarray:
        return np.array([s.mean_aoi for s in self.per_source])


def _moments_of_entries(entries: Sequence[int] | np.ndarray, sys: SystemSpec) -> tuple[float, float]:
    """(mean, variance) of the summed service time of ``entries`` (1-based).

    Empty sequences are allowed here and yield (0, 0); the public
    ``pattern_moments`` rejects them.
    """
    n = sys.n_sources
    mean = 0.0
    var = 0.0
    for e in entries:
        if not 1 <= e <= n:
            raise InvalidPatternError(f"entry {e} is not a source index in 1..{n}")
        src = sys.sources[e - 1]
        mean += src.mean_service
        var += src.variance
    return mean, var


def pattern_moments(pattern: Pattern | Sequence[int], sys: SystemSpec) -> PatternMoments:
    """Moments of the service time needed to transmit one full pattern.

    Individual service times within a pattern are independent, so means and
    variances add across entries.

    Raises
    ------
    InvalidPatternError
        If the pattern is empty or contains an out-of-range source index.
    """
    entries = pattern.entries if isinstance(pattern, Pattern) else tuple(pattern)
    if len(entries) == 0:
        raise InvalidPatternError("pattern must contain at least one entry")
    mean, var = _moments_of_entries(entries, sys)
    return PatternMoments(mean=mean, variance=var)


def mean_aoi_from_moments(own: MomentPair, gap: MomentPair) -> float:
    """Mean age of a source from its service moments and its gap moments.

    The gap is the total time between the end of one transmission of the
    source and the start of its next transmission.  The mean age is the
    expected sawtooth area per renewal cycle divided by the expected cycle
    length::

        (2*s**2 + 4*s*g + q + qg) / (2*(s + g))

    with ``(s, q)`` the service moments and ``(g, qg)`` the gap moments.

    Raises
    ------
    ValueError
        If the own mean is not positive (the cycle length would vanish).
    """
    if own.mean <= 0.0:
        raise ValueError("own service mean must be positive")
    if gap.mean < 0.0:
        raise ValueError("gap mean must be nonnegative")
    s, q = own.mean, own.second_moment
    g, qg = gap.mean, gap.second_moment
    denom = 2.0 * (s + g)
    if denom <= 0.0:
        raise ValueError("cycle length denominator must be positive")
    return (2.0 * s * s + 4.0 * s * g + q + qg) / denom


def system_aoi(per_source: Sequence[float], sys: SystemSpec) -> float:
    """Weighted sum of per-source mean ages using the stored (raw) weights."""
    if len(per_source) != sys.n_sources:
        raise ValueError(
            f"expected {sys.n_sources} per-source values, got {len(per_source)}"
        )
    return float(np.dot(sys.weights, np.asarray(per_source, dtype=float)))

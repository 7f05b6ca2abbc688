"""Service-time laws parameterized by mean and squared coefficient of
variation, with moment-matched samplers.

Only the first two moments enter the analytic formulas, so a simulation
family is pinned down by (mean, scv): deterministic for scv 0, exponential
for scv 1, gamma for any positive scv, and a balanced-means two-phase
hyperexponential for scv above 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SourceSpec

__all__ = ["DistSpec", "ServiceSampler", "make_sampler"]

_FAMILIES = ("deterministic", "exponential", "gamma", "hyperexp2")


@dataclass(frozen=True)
class DistSpec:
    """A service-time law: family name, mean, and scv."""

    family: str
    mean: float
    scv: float = 0.0

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected {_FAMILIES}")
        if not np.isfinite(self.mean) or self.mean <= 0.0:
            raise ValueError(f"mean must be positive, got {self.mean}")
        if not np.isfinite(self.scv) or self.scv < 0.0:
            raise ValueError(f"scv must be >= 0, got {self.scv}")
        if self.family == "deterministic" and self.scv != 0.0:
            raise ValueError("deterministic law requires scv == 0")
        if self.family == "exponential" and self.scv != 1.0:
            raise ValueError("exponential law requires scv == 1")
        if self.family == "gamma" and self.scv <= 0.0:
            raise ValueError("gamma law requires scv > 0")
        if self.family == "hyperexp2" and self.scv <= 1.0:
            raise ValueError("two-phase hyperexponential requires scv > 1")

    @classmethod
    def from_scv(cls, mean: float, scv: float) -> "DistSpec":
        """Pick a default family for the given scv: deterministic at 0,
        exponential at 1, gamma otherwise."""
        if scv == 0.0:
            return cls("deterministic", mean, 0.0)
        if scv == 1.0:
            return cls("exponential", mean, 1.0)
        return cls("gamma", mean, scv)

    @property
    def second_moment(self) -> float:
        return (1.0 + self.scv) * self.mean**2

    @property
    def variance(self) -> float:
        return self.scv * self.mean**2

    def to_source_spec(self, weight: float) -> SourceSpec:
        return SourceSpec(
            weight=weight, mean_service=self.mean, second_moment=self.second_moment
        )


class ServiceSampler:
    """An i.i.d. stream of service times matching a DistSpec's two moments."""

    def __init__(self, spec: DistSpec, rng: np.random.Generator):
        self.spec = spec
        self._rng = rng
        family = spec.family
        if family == "gamma":
            self._shape = 1.0 / spec.scv
            self._scale = spec.mean * spec.scv
        elif family == "hyperexp2":
            # Balanced means: each phase carries half the mean.
            c = spec.scv
            p1 = 0.5 * (1.0 + math.sqrt((c - 1.0) / (c + 1.0)))
            self._p1 = p1
            self._phase_means = (spec.mean / (2.0 * p1), spec.mean / (2.0 * (1.0 - p1)))

    def draw(self, size: int) -> np.ndarray:
        """Draw ``size`` service times as a float array."""
        spec = self.spec
        rng = self._rng
        if spec.family == "deterministic":
            return np.full(size, spec.mean)
        if spec.family == "exponential":
            return rng.exponential(spec.mean, size)
        if spec.family == "gamma":
            return rng.gamma(self._shape, self._scale, size)
        branch = rng.random(size) < self._p1
        scales = np.where(branch, self._phase_means[0], self._phase_means[1])
        return rng.exponential(scales)


def make_sampler(spec: DistSpec, seed: int | np.random.Generator) -> ServiceSampler:
    """Build a sampler for ``spec`` seeded by an integer or an existing
    generator (the latter shares its stream)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return ServiceSampler(spec, rng)

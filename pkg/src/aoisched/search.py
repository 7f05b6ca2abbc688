"""Pattern search for any number of sources.

The insertion search grows a cyclic pattern greedily: starting from round
robin, each round tries every single-slot insertion, keeps the best one if
it strictly lowers the weighted system age, and stops otherwise.  An
exhaustive enumeration over short cycle lengths serves as the validation
oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, DegenerateWeightsError
from .model import Pattern, SystemSpec
from .openloop import _per_source_aoi_entries

__all__ = [
    "SearchStep",
    "SearchTrace",
    "insert",
    "insertion_search",
    "exhaustive_search",
]

# Relative decrease below this does not count as an improvement, so float
# noise cannot keep the search alive.
_IMPROVEMENT_RTOL = 1e-12


@dataclass(frozen=True)
class SearchStep:
    cycle_length: int
    pattern: Pattern
    system_aoi: float


@dataclass(frozen=True)
class SearchTrace:
    """Accepted patterns per cycle length, in order, plus why the search
    stopped ("converged" or "hit_k_max") and how many candidate patterns
    each round evaluated."""

    steps: tuple[SearchStep, ...]
    terminal_reason: str
    evaluations: tuple[int, ...]

    @property
    def best_cycle_length(self) -> int:
        return self.steps[-1].cycle_length


def insert(pattern: Pattern, source: int, position: int) -> Pattern:
    """New pattern with a ``source`` slot inserted before ``position``."""
    k = len(pattern)
    if not 0 <= position < k:
        raise ValueError(f"position {position} out of range 0..{k - 1}")
    if source < 1:
        raise ValueError(f"source index must be >= 1, got {source}")
    entries = pattern.entries
    return Pattern(entries[:position] + (source,) + entries[position:])


def _system_aoi_entries(entries0: np.ndarray, sys: SystemSpec, w: np.ndarray) -> float:
    aois = _per_source_aoi_entries(entries0, sys.means, sys.variances, sys.second_moments)
    return float(np.dot(w, aois))


def insertion_search(
    sys: SystemSpec, k_max: int | None = None
) -> tuple[Pattern, SearchTrace]:
    """Greedy insertion search starting from round robin.

    Each round scans every (source, position) insertion into the current
    pattern, skipping the positions already holding that source (the
    insertion there duplicates the one just after it), and accepts the best
    candidate if it strictly improves the weighted system age.  Stops when
    no insertion improves or the cycle length reaches ``k_max`` (default
    ``100 * n_sources``).

    Raises
    ------
    DegenerateWeightsError
        If some source has zero weight: the search would starve it to lower
        the objective, leaving that source's age unbounded.
    """
    n = sys.n_sources
    if n < 2:
        raise ValueError("insertion search needs at least two sources")
    if np.any(sys.weights == 0.0):
        raise DegenerateWeightsError("all sources need positive weight")
    if k_max is None:
        k_max = 100 * n
    if k_max < n:
        raise ValueError(f"k_max must be at least the number of sources ({n})")

    w = sys.weights
    current = np.arange(n, dtype=np.int64)  # round robin, zero-based
    current_aoi = _system_aoi_entries(current, sys, w)
    steps = [SearchStep(n, Pattern(current + 1), current_aoi)]
    evaluations: list[int] = []

    reason = "hit_k_max" if len(current) >= k_max else None
    while reason is None:
        k = len(current)
        best_aoi = math.inf
        best_candidate: np.ndarray | None = None
        evaluated = 0
        for source0 in range(n):
            for position in range(k):
                if current[position] == source0:
                    continue
                candidate = np.insert(current, position, source0)
                aoi = _system_aoi_entries(candidate, sys, w)
                evaluated += 1
                if aoi < best_aoi:
                    best_aoi = aoi
                    best_candidate = candidate
        evaluations.append(evaluated)
        if best_candidate is None or best_aoi >= current_aoi * (1.0 - _IMPROVEMENT_RTOL):
            reason = "converged"
            break
        current = best_candidate
        current_aoi = best_aoi
        steps.append(SearchStep(len(current), Pattern(current + 1), current_aoi))
        if len(current) >= k_max:
            reason = "hit_k_max"

    trace = SearchTrace(
        steps=tuple(steps), terminal_reason=reason, evaluations=tuple(evaluations)
    )
    return steps[-1].pattern, trace


def _is_canonical_rotation(entries: tuple[int, ...]) -> bool:
    """True when ``entries`` is lexicographically minimal among its
    rotations, so each cyclic equivalence class is enumerated once."""
    k = len(entries)
    doubled = entries + entries
    for shift in range(1, k):
        rotated = doubled[shift : shift + k]
        if rotated < entries:
            return False
    return True


def exhaustive_search(
    sys: SystemSpec, k_cap: int, budget: int = 10**8
) -> tuple[Pattern, float]:
    """Best feasible pattern over all cycle lengths up to ``k_cap`` by full
    enumeration, modulo rotation.

    Ties go to the shorter cycle, then to the lexicographically smaller
    pattern (the enumeration order guarantees both).

    Raises
    ------
    BudgetExceededError
        If the enumeration would touch more than ``budget`` pattern entries;
        there is no silent truncation.
    """
    n = sys.n_sources
    if k_cap < n:
        raise ValueError(f"k_cap must be at least the number of sources ({n})")
    work = sum(n**k * k for k in range(n, k_cap + 1))
    if work > budget:
        raise BudgetExceededError(
            f"enumeration needs ~{work:.3g} entry evaluations, budget is {budget:.3g}"
        )

    w = sys.weights
    best_aoi = math.inf
    best: tuple[int, ...] | None = None
    for k in range(n, k_cap + 1):
        for entries in itertools.product(range(1, n + 1), repeat=k):
            if len(set(entries)) != n:
                continue
            if not _is_canonical_rotation(entries):
                continue
            entries0 = np.asarray(entries, dtype=np.int64) - 1
            aoi = _system_aoi_entries(entries0, sys, w)
            if aoi < best_aoi * (1.0 - _IMPROVEMENT_RTOL):
                best_aoi = aoi
                best = entries
    assert best is not None  # k_cap >= n guarantees at least round robin
    return Pattern(best), best_aoi

"""Closed-form optimal cyclic scheduling for two sources.

For two sources, the optimum cyclic schedule always serves one source in a
long balanced run and the other exactly once per cycle.  Which source gets
the run, and how long it should be, follow from two closed-form
discriminants with threshold ``(s1 + s2)**2``: when neither discriminant
exceeds the threshold, plain round robin is optimal; otherwise a relaxed
real-valued run length pins the two integer candidates to compare.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import DegenerateWeightsError
from .model import Pattern, SystemSpec
from .openloop import cgaw_aoi

__all__ = [
    "TwoSourcePolicy",
    "TwoSourceOptimum",
    "optimal_placement",
    "policy_to_pattern",
    "aoi_k1_family",
    "aoi_k2_family",
    "two_source_discriminants",
    "solve_two_source",
    "decomposition_check",
]


@dataclass(frozen=True)
class TwoSourcePolicy:
    """A two-source cyclic policy: per-cycle update counts plus placement.

    ``placement[k]`` counts the source-2 slots between the k-th and
    (k+1)-st source-1 slots, so the entries sum to ``k2``.
    """

    k1: int
    k2: int
    placement: tuple[int, ...]

    def __init__(self, k1: int, k2: int, placement: Iterable[int]):
        placement = tuple(int(r) for r in placement)
        if k1 < 1 or k2 < 1:
            raise ValueError("both per-cycle update counts must be >= 1")
        if len(placement) != k1:
            raise ValueError(f"placement must have {k1} entries, got {len(placement)}")
        if any(r < 0 for r in placement):
            raise ValueError("placement entries must be nonnegative")
        if sum(placement) != k2:
            raise ValueError(
                f"placement entries must sum to k2={k2}, got {sum(placement)}"
            )
        object.__setattr__(self, "k1", int(k1))
        object.__setattr__(self, "k2", int(k2))
        object.__setattr__(self, "placement", placement)

    @property
    def cycle_length(self) -> int:
        return self.k1 + self.k2


@dataclass(frozen=True)
class TwoSourceOptimum:
    """Result of the closed-form two-source solve.

    ``branch`` records which of the three candidate families won:
    "round-robin", "many-source-1" (runs of source-1 updates), or
    "many-source-2".  ``relaxed_k1``/``relaxed_k2`` are the real-valued
    stationary run lengths when the corresponding discriminant is positive,
    else None.
    """

    policy: TwoSourcePolicy
    discriminant_1: float
    discriminant_2: float
    relaxed_k1: float | None
    relaxed_k2: float | None
    system_aoi: float
    branch: str


def _balanced_split(total: int, parts: int) -> tuple[int, ...]:
    """``parts`` nonnegative integers summing to ``total``, as equal as
    possible, smaller values first."""
    base, extra = divmod(total, parts)
    return (base,) * (parts - extra) + (base + 1,) * extra


def optimal_placement(k1: int, k2: int) -> tuple[int, ...]:
    """Placement vector minimizing both per-source mean ages at fixed counts.

    For ``k1 <= k2`` this is the balanced split of the source-2 slots across
    the source-1 gaps (small entries first).  For ``k1 > k2`` the balanced
    split is applied to the source-2 placement instead and converted back,
    which interleaves the zero entries; grouping them would leave one
    source-2 gap much longer than the rest and inflate the source-2 age.
    """
    if k1 < 1 or k2 < 1:
        raise ValueError("both counts must be >= 1")
    if k1 <= k2:
        return _balanced_split(k2, k1)
    # Build the pattern from the balanced source-2 placement, then read off
    # the source-1 placement it induces.
    z = _balanced_split(k1, k2)
    entries: list[int] = []
    for z_j in z:
        entries.append(2)
        entries.extend([1] * z_j)
    first_one = entries.index(1)
    entries = entries[first_one:] + entries[:first_one]
    ones = [i for i, e in enumerate(entries) if e == 1]
    k = len(entries)
    r = []
    for idx, pos in enumerate(ones):
        nxt = ones[(idx + 1) % len(ones)]
        span = (nxt - pos) % k
        r.append(span - 1)
    return tuple(r)


def policy_to_pattern(policy: TwoSourcePolicy) -> Pattern:
    """Expand a policy into its cyclic pattern: each source-1 slot followed
    by the corresponding run of source-2 slots."""
    entries: list[int] = []
    for r_k in policy.placement:
        entries.append(1)
        entries.extend([2] * r_k)
    return Pattern(entries)


def _two_source_params(sys: SystemSpec) -> tuple[float, float, float, float]:
    if sys.n_sources != 2:
        raise ValueError(f"expected a two-source system, got {sys.n_sources}")
    s1, s2 = sys.means
    q1, q2 = sys.second_moments
    return float(s1), float(q1), float(s2), float(q2)


def aoi_k1_family(k1: int, sys: SystemSpec) -> tuple[float, float]:
    """Per-source mean ages of the policy with ``k1`` source-1 updates and a
    single source-2 update per cycle, in closed form."""
    if k1 < 1:
        raise ValueError("k1 must be >= 1")
    s1, q1, s2, q2 = _two_source_params(sys)
    denom = 2.0 * (k1 * s1 + s2)
    aoi1 = (k1 * (2.0 * s1 * s1 + q1) + 4.0 * s1 * s2 + q2) / denom
    aoi2 = (
        k1 * k1 * s1 * s1 + k1 * (4.0 * s1 * s2 + q1 - s1 * s1) + 2.0 * s2 * s2 + q2
    ) / denom
    return aoi1, aoi2


def aoi_k2_family(k2: int, sys: SystemSpec) -> tuple[float, float]:
    """Per-source mean ages of the policy with a single source-1 update and
    ``k2`` source-2 updates per cycle, in closed form."""
    if k2 < 1:
        raise ValueError("k2 must be >= 1")
    s1, q1, s2, q2 = _two_source_params(sys)
    denom = 2.0 * (k2 * s2 + s1)
    aoi1 = (
        k2 * k2 * s2 * s2 + k2 * (4.0 * s1 * s2 + q2 - s2 * s2) + 2.0 * s1 * s1 + q1
    ) / denom
    aoi2 = (k2 * (2.0 * s2 * s2 + q2) + 4.0 * s1 * s2 + q1) / denom
    return aoi1, aoi2


def two_source_discriminants(sys: SystemSpec) -> tuple[float, float]:
    """The pair of closed-form discriminants deciding round robin versus a
    lopsided policy, computed with weights normalized to sum to one.

    Discriminant n exceeding ``(s1 + s2)**2`` means that repeating source n
    more than once per cycle pays off.  They cannot both exceed it: weighted
    by the opposite source's normalized weight and mean they always add up
    to ``s1 * s2 * (s1 + s2)``.

    Raises
    ------
    DegenerateWeightsError
        If either weight is zero (the discriminants divide by the weights,
        and the nominal optimum would starve the unweighted source).
    """
    s1, q1, s2, q2 = _two_source_params(sys)
    w = sys.weights
    if w[0] == 0.0 or w[1] == 0.0:
        raise DegenerateWeightsError(
            "both sources need positive weight for the two-source solve"
        )
    w1, w2 = sys.normalized_weights
    d1 = (s1 * q2 - q1 * s2 + (w1 + 1.0) * s1 * s1 * s2 - w2 * s2 * s2 * s1) / (s1 * w2)
    d2 = (s2 * q1 - q2 * s1 + (w2 + 1.0) * s2 * s2 * s1 - w1 * s1 * s1 * s2) / (s2 * w1)
    return float(d1), float(d2)


def _system_aoi_of_pair(aois: tuple[float, float], sys: SystemSpec) -> float:
    w = sys.weights
    return float(w[0] * aois[0] + w[1] * aois[1])


def solve_two_source(sys: SystemSpec) -> TwoSourceOptimum:
    """Closed-form optimal cyclic policy for a two-source system.

    Evaluates round robin plus, when a discriminant exceeds the threshold,
    the floor and ceiling of the relaxed run length in the corresponding
    one-sided family, and returns the candidate with the lowest weighted
    system age (exact ties go to the shorter cycle).
    """
    s1, _, s2, _ = _two_source_params(sys)
    d1, d2 = two_source_discriminants(sys)
    threshold = (s1 + s2) ** 2
    relaxed_k1 = (math.sqrt(d1) - s2) / s1 if d1 > 0.0 else None
    relaxed_k2 = (math.sqrt(d2) - s1) / s2 if d2 > 0.0 else None

    candidates: list[tuple[int, int]] = [(1, 1)]
    if d1 > threshold and relaxed_k1 is not None:
        lo = max(1, math.floor(relaxed_k1))
        hi = max(1, math.ceil(relaxed_k1))
        candidates.extend({(lo, 1), (hi, 1)})
    if d2 > threshold and relaxed_k2 is not None:
        lo = max(1, math.floor(relaxed_k2))
        hi = max(1, math.ceil(relaxed_k2))
        candidates.extend({(1, lo), (1, hi)})

    scored = []
    for k1, k2 in candidates:
        if k2 == 1:
            aois = aoi_k1_family(k1, sys)
        else:
            aois = aoi_k2_family(k2, sys)
        scored.append((_system_aoi_of_pair(aois, sys), k1 + k2, k1, (k1, k2)))
    scored.sort(key=lambda t: t[:3])
    best_aoi, _, _, (k1, k2) = scored[0]

    policy = TwoSourcePolicy(k1, k2, optimal_placement(k1, k2))
    if (k1, k2) == (1, 1):
        branch = "round-robin"
    elif k1 > 1:
        branch = "many-source-1"
    else:
        branch = "many-source-2"
    return TwoSourceOptimum(
        policy=policy,
        discriminant_1=d1,
        discriminant_2=d2,
        relaxed_k1=relaxed_k1,
        relaxed_k2=relaxed_k2,
        system_aoi=best_aoi,
        branch=branch,
    )


def decomposition_check(policy: TwoSourcePolicy, sys: SystemSpec) -> tuple[float, float]:
    """Evaluate both sides of the cycle-mixture identity for a balanced
    policy whose slots-per-run ratio is fractional.

    The policy's system age equals the duration-weighted average of the two
    neighboring one-sided policies (run lengths at the floor and ceiling of
    the ratio).  Returns (policy value, mixture value); the caller asserts
    how close they must be.

    Preconditions: two sources, ``k1 <= k2``, fractional ``(k1 + k2) / k1``,
    and the balanced placement.
    """
    _two_source_params(sys)
    k1, k2 = policy.k1, policy.k2
    if k1 > k2:
        raise ValueError("decomposition requires k1 <= k2")
    k = k1 + k2
    gamma = k / k1
    if gamma == math.floor(gamma):
        raise ValueError("decomposition requires a fractional slots-per-run ratio")
    if policy.placement != optimal_placement(k1, k2):
        raise ValueError("decomposition requires the balanced placement")

    lhs_report = cgaw_aoi(policy_to_pattern(policy), sys)
    lhs = lhs_report.system_aoi

    s1, _, s2, _ = _two_source_params(sys)
    floor_g = math.floor(gamma)
    ceil_g = math.ceil(gamma)
    t_a = (s2 * (floor_g - 1) + s1) * (k1 * ceil_g - k)
    t_b = (s2 * (ceil_g - 1) + s1) * (k1 - k1 * ceil_g + k)
    aoi_a = _system_aoi_of_pair(aoi_k2_family(floor_g - 1, sys), sys)
    aoi_b = _system_aoi_of_pair(aoi_k2_family(floor_g, sys), sys)
    rhs = (t_a * aoi_a + t_b * aoi_b) / (t_a + t_b)
    return lhs, rhs

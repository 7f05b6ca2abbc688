"""Age-of-information analysis and open-loop scheduling for multi-source
generate-at-will status update systems.

The library computes exact weighted mean ages for probabilistic and cyclic
open-loop schedulers from the first two moments of the per-source service
times, solves the two-source cyclic scheduling problem in closed form,
searches for good cyclic schedules for more sources, optimizes
probabilistic schedulers, and cross-validates everything with an exact
discrete-event simulator that also covers random-arrival buffer management.
"""

from .distributions import DistSpec, ServiceSampler, make_sampler
from .errors import (
    AoiSchedError,
    BudgetExceededError,
    ConfigError,
    DegenerateWeightsError,
    InfeasiblePatternError,
    InvalidPatternError,
    SimulationError,
    UnboundedAgeError,
)
from .model import (
    AoiReport,
    MomentPair,
    Pattern,
    PatternMoments,
    SourceAoi,
    SourceSpec,
    SystemSpec,
    mean_aoi_from_moments,
    pattern_moments,
    system_aoi,
)
from .openloop import (
    ProbVector,
    SubpatternSet,
    cgaw_aoi,
    cgaw_gap_moments,
    pgaw_aoi,
    pgaw_gap_moments,
    subpatterns,
)
from .probopt import optimize_pgaw_multi, optimize_pgaw_two
from .search import (
    SearchStep,
    SearchTrace,
    exhaustive_search,
    insert,
    insertion_search,
)
from .sim import (
    BufferPolicy,
    LcfsW,
    Pr,
    RaSb,
    SimConfig,
    Sps,
    pr_policy_step,
    simulate_gaw,
    simulate_ra,
    windowed_age_mean,
)
from .two_source import (
    TwoSourceOptimum,
    TwoSourcePolicy,
    aoi_k1_family,
    aoi_k2_family,
    decomposition_check,
    optimal_placement,
    policy_to_pattern,
    solve_two_source,
    two_source_discriminants,
)

__version__ = "0.1.0"

__all__ = [
    "AoiReport",
    "AoiSchedError",
    "BudgetExceededError",
    "BufferPolicy",
    "ConfigError",
    "DegenerateWeightsError",
    "DistSpec",
    "InfeasiblePatternError",
    "InvalidPatternError",
    "LcfsW",
    "MomentPair",
    "Pattern",
    "PatternMoments",
    "Pr",
    "ProbVector",
    "RaSb",
    "SearchStep",
    "SearchTrace",
    "ServiceSampler",
    "SimConfig",
    "SimulationError",
    "SourceAoi",
    "SourceSpec",
    "Sps",
    "SubpatternSet",
    "SystemSpec",
    "TwoSourceOptimum",
    "TwoSourcePolicy",
    "UnboundedAgeError",
    "aoi_k1_family",
    "aoi_k2_family",
    "cgaw_aoi",
    "cgaw_gap_moments",
    "decomposition_check",
    "exhaustive_search",
    "insert",
    "insertion_search",
    "make_sampler",
    "mean_aoi_from_moments",
    "optimal_placement",
    "optimize_pgaw_multi",
    "optimize_pgaw_two",
    "pattern_moments",
    "pgaw_aoi",
    "pgaw_gap_moments",
    "policy_to_pattern",
    "pr_policy_step",
    "simulate_gaw",
    "simulate_ra",
    "solve_two_source",
    "subpatterns",
    "system_aoi",
    "two_source_discriminants",
    "windowed_age_mean",
]

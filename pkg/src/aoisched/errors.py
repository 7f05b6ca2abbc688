"""Exception hierarchy shared across the package."""


class AoiSchedError(Exception):
    """Base class for all package-specific errors."""


class InvalidPatternError(AoiSchedError):
    """Pattern is malformed: empty, or an entry is not a valid source index."""


class InfeasiblePatternError(AoiSchedError):
    """Pattern never serves one or more sources, so their age is unbounded."""


class UnboundedAgeError(AoiSchedError):
    """A scheduling probability is zero (or numerically indistinguishable
    from zero), which starves a source and makes its expected age infinite."""


class DegenerateWeightsError(AoiSchedError):
    """An optimizer was given a source with zero weight; the nominal optimum
    would starve that source, so the request is rejected instead."""


class BudgetExceededError(AoiSchedError):
    """An enumeration would exceed its configured work budget."""


class SimulationError(AoiSchedError):
    """A simulation run cannot produce a valid estimate, e.g. the horizon is
    too short to cover the warm-up period."""


class ConfigError(AoiSchedError):
    """An experiment configuration file failed to parse or validate."""

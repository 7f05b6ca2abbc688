"""Shared test helpers: random instance generators and brute-force oracles."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from aoisched import Pattern, SourceSpec, SystemSpec


def random_source(rng: np.random.Generator, weight: float | None = None) -> SourceSpec:
    """A random source: log-uniform mean, mixed service variability."""
    if weight is None:
        weight = float(rng.uniform(0.05, 1.0))
    mean = float(np.exp(rng.uniform(np.log(0.3), np.log(10.0))))
    scv = float(rng.choice([0.0, rng.uniform(0.1, 4.0)], p=[0.25, 0.75]))
    return SourceSpec.from_scv(weight, mean, scv)


def random_system(
    rng: np.random.Generator, n: int, normalized: bool = False
) -> SystemSpec:
    sources = [random_source(rng) for _ in range(n)]
    if normalized:
        total = sum(s.weight for s in sources)
        sources = [
            SourceSpec(s.weight / total, s.mean_service, s.second_moment)
            for s in sources
        ]
    return SystemSpec(sources)


def compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def placement_pattern(placement: tuple[int, ...]) -> Pattern:
    """Expand a two-source placement vector into its pattern."""
    entries: list[int] = []
    for r in placement:
        entries.append(1)
        entries.extend([2] * r)
    return Pattern(entries)


def all_feasible_patterns(n: int, k: int):
    """All feasible patterns of length exactly ``k`` over ``n`` sources."""
    for entries in itertools.product(range(1, n + 1), repeat=k):
        if len(set(entries)) == n:
            yield Pattern(entries)


# ----------------------------------------------------------------------
# One pass/fail line per acceptance criterion at the end of the run.
# ----------------------------------------------------------------------

_ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _ACCEPTANCE_RESULTS[name] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and report.skipped:
        _ACCEPTANCE_RESULTS[name] = "SKIP"
    elif report.when == "setup" and report.failed:
        _ACCEPTANCE_RESULTS[name] = "ERROR"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{_ACCEPTANCE_RESULTS[name]}] {name}")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)

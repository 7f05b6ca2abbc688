"""Probabilistic and cyclic scheduler analysis."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aoisched import (
    InfeasiblePatternError,
    Pattern,
    ProbVector,
    SourceSpec,
    SystemSpec,
    UnboundedAgeError,
    cgaw_aoi,
    cgaw_gap_moments,
    pgaw_aoi,
    pgaw_gap_moments,
    subpatterns,
)
from conftest import random_system


def symmetric_exponential(n=2, mean=1.0):
    return SystemSpec([SourceSpec.from_scv(1.0 / n, mean, 1.0) for _ in range(n)])


class TestProbVector:
    def test_valid(self):
        p = ProbVector([0.3, 0.7])
        assert np.allclose(p.as_array(), [0.3, 0.7])

    def test_zero_entry_rejected(self):
        with pytest.raises(UnboundedAgeError):
            ProbVector([1.0, 0.0])

    def test_tiny_entry_rejected(self):
        with pytest.raises(UnboundedAgeError):
            ProbVector([1.0 - 1e-13, 1e-13])

    def test_bad_sum_rejected(self):
        with pytest.raises(ValueError):
            ProbVector([0.5, 0.6])


class TestPgawGapMoments:
    def test_two_source_symmetric_exponential(self):
        sys = symmetric_exponential()
        gap = pgaw_gap_moments(ProbVector([0.5, 0.5]), sys, 1)
        assert gap.mean == pytest.approx(1.0)
        assert gap.second_moment == pytest.approx(4.0)

    def test_dominant_source_gap_vanishes(self):
        eps = 1e-6
        sys = SystemSpec([SourceSpec.from_scv(0.5, 1.0, 1.0), SourceSpec.from_scv(0.5, 2.0, 1.0)])
        gap = pgaw_gap_moments(ProbVector([1 - eps, eps]), sys, 1)
        assert gap.mean == pytest.approx(eps * 2.0 / (1 - eps), rel=1e-9)

    def test_three_uniform_deterministic(self):
        sys = SystemSpec([SourceSpec.from_scv(1 / 3, 1.0, 0.0) for _ in range(3)])
        gap = pgaw_gap_moments(ProbVector([1 / 3] * 3), sys, 2)
        assert gap.mean == pytest.approx(2.0)
        assert gap.second_moment == pytest.approx(10.0)

    def test_monte_carlo_geometric_gap_oracle(self, rng):
        # Independent check of the closed form: draw the geometric count of
        # other-source slots per gap and sum their service draws directly.
        sys = SystemSpec(
            [SourceSpec.from_scv(0.5, 2.0, 1.0), SourceSpec.from_scv(0.5, 3.0, 1.0)]
        )
        p = (0.4, 0.6)
        n_trials = 300_000
        counts = rng.geometric(p[0], size=n_trials) - 1
        draws = rng.exponential(3.0, size=int(counts.sum()))
        ends = np.cumsum(counts)
        sums = np.concatenate([[0.0], np.cumsum(draws)])
        total = sums[ends] - sums[ends - counts]
        gap = pgaw_gap_moments(ProbVector(p), sys, 1)
        assert total.mean() == pytest.approx(gap.mean, rel=0.02)
        assert (total**2).mean() == pytest.approx(gap.second_moment, rel=0.03)


class TestPgawAoi:
    def test_symmetric_exponential_system(self):
        sys = symmetric_exponential()
        report = pgaw_aoi(ProbVector([0.5, 0.5]), sys)
        assert report.system_aoi == pytest.approx(3.0)
        assert report.method == "analytic"

    def test_zero_weight_system_aoi_tracks_weighted_source(self):
        sys = SystemSpec([SourceSpec.from_scv(1.0, 1.0, 1.0), SourceSpec.from_scv(0.0, 2.0, 1.0)])
        report = pgaw_aoi(ProbVector([0.5, 0.5]), sys)
        assert report.system_aoi == pytest.approx(report.per_source[0].mean_aoi)

    def test_symmetric_sources_have_equal_aoi(self):
        sys = symmetric_exponential(n=4)
        report = pgaw_aoi(ProbVector([0.25] * 4), sys)
        aois = report.mean_aois()
        assert np.allclose(aois, aois[0])

    def test_report_weighted_sum_invariant(self):
        sys = SystemSpec(
            [SourceSpec.from_scv(0.7, 1.0, 1.0), SourceSpec.from_scv(0.3, 4.0, 2.0)]
        )
        report = pgaw_aoi(ProbVector([0.6, 0.4]), sys)
        expected = float(np.dot(sys.weights, report.mean_aois()))
        assert report.system_aoi == pytest.approx(expected, rel=1e-12)


class TestSubpatterns:
    def test_seven_slot_example(self):
        parts = subpatterns(Pattern([3, 1, 2, 3, 1, 3, 2]), 1).parts
        assert parts == ((2, 3), (3, 2, 3))

    def test_round_robin(self):
        assert subpatterns(Pattern([1, 2]), 1).parts == ((2,),)

    def test_back_to_back_gives_empty_part(self):
        assert subpatterns(Pattern([1, 1, 2]), 1).parts == ((), (2,))

    def test_absent_source_rejected(self):
        with pytest.raises(InfeasiblePatternError):
            subpatterns(Pattern([1, 1]), 2)

    @given(st.lists(st.integers(1, 3), min_size=3, max_size=12))
    def test_lengths_account_for_every_slot(self, entries):
        entries = entries + [1, 2, 3]  # force feasibility
        pattern = Pattern(entries)
        k = len(pattern)
        for source in (1, 2, 3):
            parts = subpatterns(pattern, source).parts
            count = sum(1 for e in entries if e == source)
            assert len(parts) == count
            assert sum(len(p) for p in parts) == k - count
            assert all(source not in p for p in parts)


class TestCgawGapMoments:
    def test_round_robin_single_gap(self):
        sys = SystemSpec(
            [SourceSpec.from_scv(0.5, 5.0, 1.0), SourceSpec.from_scv(0.5, 15.0, 1.0)]
        )
        gap = cgaw_gap_moments(Pattern([1, 2]), sys, 1)
        assert gap.mean == pytest.approx(15.0)
        assert gap.second_moment == pytest.approx(450.0)

    def test_back_to_back_average(self):
        sys = SystemSpec(
            [SourceSpec.from_scv(0.5, 1.0, 1.0), SourceSpec.from_scv(0.5, 1.0, 0.0)]
        )
        gap = cgaw_gap_moments(Pattern([1, 1, 2]), sys, 1)
        assert gap.mean == pytest.approx(0.5)
        assert gap.second_moment == pytest.approx(0.5)

    def test_repetition_invariance(self):
        sys = SystemSpec(
            [SourceSpec.from_scv(0.5, 5.0, 1.0), SourceSpec.from_scv(0.5, 15.0, 1.0)]
        )
        for source in (1, 2):
            short = cgaw_gap_moments(Pattern([1, 2]), sys, source)
            long = cgaw_gap_moments(Pattern([1, 2, 1, 2]), sys, source)
            assert long.mean == pytest.approx(short.mean, rel=1e-15)
            assert long.second_moment == pytest.approx(short.second_moment, rel=1e-15)

    def test_matches_materialized_subpatterns(self, rng):
        # The single-pass computation must agree with averaging over the
        # explicitly materialized gap sequences.
        for _ in range(30):
            n = int(rng.integers(2, 5))
            sys = random_system(rng, n)
            k = int(rng.integers(n, 13))
            entries = list(rng.integers(1, n + 1, size=k)) + list(range(1, n + 1))
            pattern = Pattern(entries)
            for source in range(1, n + 1):
                fast = cgaw_gap_moments(pattern, sys, source)
                slow = subpatterns(pattern, source).gap_moments(sys)
                assert fast.mean == pytest.approx(slow.mean, rel=1e-12)
                assert fast.second_moment == pytest.approx(slow.second_moment, rel=1e-12)


class TestCgawAoi:
    def test_symmetric_deterministic_round_robin(self):
        sys = SystemSpec([SourceSpec.from_scv(0.5, 1.0, 0.0)] * 2)
        report = cgaw_aoi(Pattern([1, 2]), sys)
        assert report.system_aoi == pytest.approx(2.0)

    def test_symmetric_exponential_round_robin(self):
        report = cgaw_aoi(Pattern([1, 2]), symmetric_exponential())
        assert report.system_aoi == pytest.approx(2.5)

    def test_rotation_invariance_exact(self, rng):
        sys = random_system(rng, 3)
        pattern = Pattern([3, 1, 2, 3, 1, 3, 2])
        base = cgaw_aoi(pattern, sys)
        for k in range(1, len(pattern)):
            rotated = cgaw_aoi(pattern.rotated(k), sys)
            assert rotated.mean_aois() == pytest.approx(base.mean_aois(), rel=1e-13)

    def test_repetition_invariance(self, rng):
        sys = random_system(rng, 2)
        base = cgaw_aoi(Pattern([1, 2, 2]), sys)
        triple = cgaw_aoi(Pattern([1, 2, 2] * 3), sys)
        assert triple.mean_aois() == pytest.approx(base.mean_aois(), rel=1e-13)

    def test_error_names_missing_source(self):
        sys = SystemSpec([SourceSpec.from_scv(0.5, 1.0, 1.0)] * 3)
        with pytest.raises(InfeasiblePatternError, match="source\\(s\\) 3"):
            cgaw_aoi(Pattern([1, 2, 1]), sys)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(1, 3), min_size=0, max_size=9), st.integers(0, 11))
    def test_rotation_invariance_property(self, extra, shift):
        sys = SystemSpec([SourceSpec.from_scv(1 / 3, m, c) for m, c in
                          [(1.0, 0.0), (2.0, 1.0), (0.5, 3.0)]])
        pattern = Pattern([1, 2, 3] + extra)
        base = cgaw_aoi(pattern, sys)
        rotated = cgaw_aoi(pattern.rotated(shift), sys)
        assert rotated.mean_aois() == pytest.approx(base.mean_aois(), rel=1e-12)

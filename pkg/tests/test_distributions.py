"""Moment matching of the service-time samplers."""

import numpy as np
import pytest

from aoisched import DistSpec, make_sampler


class TestDistSpec:
    def test_second_moment(self):
        spec = DistSpec("gamma", 2.0, 5.0)
        assert spec.second_moment == pytest.approx(24.0)
        assert spec.variance == pytest.approx(20.0)

    def test_from_scv_picks_family(self):
        assert DistSpec.from_scv(1.0, 0.0).family == "deterministic"
        assert DistSpec.from_scv(1.0, 1.0).family == "exponential"
        assert DistSpec.from_scv(1.0, 0.5).family == "gamma"
        assert DistSpec.from_scv(1.0, 5.0).family == "gamma"

    @pytest.mark.parametrize(
        "family,scv",
        [
            ("deterministic", 0.5),
            ("exponential", 0.9),
            ("gamma", 0.0),
            ("hyperexp2", 1.0),
            ("hyperexp2", 0.5),
        ],
    )
    def test_inconsistent_family_scv(self, family, scv):
        with pytest.raises(ValueError):
            DistSpec(family, 1.0, scv)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            DistSpec("uniform", 1.0, 0.3)


def empirical_moments(spec, n=1_000_000, seed=123):
    draws = make_sampler(spec, seed).draw(n)
    mean = draws.mean()
    scv = draws.var() / mean**2
    return mean, scv, (draws**2).mean()


class TestSamplerMoments:
    def test_deterministic_constant(self):
        draws = make_sampler(DistSpec("deterministic", 5.0), 0).draw(100)
        assert np.all(draws == 5.0)

    def test_exponential_scv_within_one_percent(self):
        mean, scv, _ = empirical_moments(DistSpec("exponential", 1.0, 1.0))
        assert mean == pytest.approx(1.0, rel=0.01)
        assert scv == pytest.approx(1.0, rel=0.01)

    def test_gamma_second_moment_within_one_percent(self):
        mean, scv, q = empirical_moments(DistSpec("gamma", 2.0, 5.0))
        assert mean == pytest.approx(2.0, rel=0.01)
        assert q == pytest.approx(24.0, rel=0.01)

    def test_gamma_low_variability(self):
        mean, scv, _ = empirical_moments(DistSpec("gamma", 4.0, 0.25))
        assert mean == pytest.approx(4.0, rel=0.01)
        assert scv == pytest.approx(0.25, rel=0.01)

    def test_hyperexponential_moments(self):
        mean, scv, q = empirical_moments(DistSpec("hyperexp2", 3.0, 4.0))
        assert mean == pytest.approx(3.0, rel=0.01)
        assert scv == pytest.approx(4.0, rel=0.02)
        assert q == pytest.approx((1 + 4.0) * 9.0, rel=0.02)

    def test_draws_nonnegative(self):
        for spec in [
            DistSpec("exponential", 1.0, 1.0),
            DistSpec("gamma", 1.0, 3.0),
            DistSpec("hyperexp2", 1.0, 2.5),
        ]:
            draws = make_sampler(spec, 7).draw(10_000)
            assert np.all(draws >= 0.0)

    def test_deterministic_given_seed(self):
        spec = DistSpec("hyperexp2", 2.0, 3.0)
        assert np.array_equal(
            make_sampler(spec, 42).draw(1000), make_sampler(spec, 42).draw(1000)
        )

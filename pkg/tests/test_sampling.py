"""Tests for seeded exact sampling from states."""

from fractions import Fraction

import pytest

from stonekernels.dsl.sampling import (
    AncestralSampler,
    cdf_thresholds,
    pick,
    sample_report,
    sample_state,
)
from stonekernels.errors import KernelValidationError
from stonekernels.proker import coin_state
from stonekernels.stone import Clopen, binary_prefix

HALF = Fraction(1, 2)


class TestThresholds:
    """Test integer inverse-CDF thresholds."""

    def test_quarters(self):
        assert cdf_thresholds((Fraction(1, 4), Fraction(3, 4))) == (2**62, 2**64)

    def test_unnormalized_weights(self):
        assert cdf_thresholds((Fraction(1, 8), Fraction(1, 8))) == (2**63, 2**64)

    def test_pick_boundaries(self):
        thresholds = cdf_thresholds((Fraction(1, 4), Fraction(3, 4)))
        assert pick(thresholds, 0) == 0
        assert pick(thresholds, 2**62 - 1) == 0
        assert pick(thresholds, 2**62) == 1
        assert pick(thresholds, 2**64 - 1) == 1

    def test_zero_weight_is_never_picked(self):
        thresholds = cdf_thresholds((Fraction(0), Fraction(1), Fraction(0)))
        assert {pick(thresholds, w) for w in (0, 1, 2**63, 2**64 - 1)} == {1}

    def test_no_mass(self):
        with pytest.raises(KernelValidationError, match="no mass"):
            cdf_thresholds((Fraction(0), Fraction(0)))


class TestSampleState:
    """Test draws from states."""

    def test_seed_fixes_the_draws(self):
        coin = coin_state(HALF)
        assert sample_state(coin, 3, seed=7, count=50) == sample_state(coin, 3, seed=7, count=50)

    def test_draws_lie_on_the_level(self):
        samples = sample_state(coin_state(HALF), 4, seed=1, count=200)
        assert all(0 <= s < 16 for s in samples)

    def test_degenerate_coin(self):
        assert set(sample_state(coin_state(1), 3, seed=3, count=20)) == {7}
        assert set(sample_state(coin_state(0), 3, seed=3, count=20)) == {0}

    def test_point_state(self, coins_program):
        assert set(sample_state(coins_program.kernels["one"], 2, seed=0, count=10)) == {1}

    def test_not_a_state(self, coins_program):
        with pytest.raises(KernelValidationError, match="not a state"):
            sample_state(coins_program.kernels["f"], 0, seed=0, count=1)

    def test_negative_count(self):
        with pytest.raises(KernelValidationError, match="non-negative"):
            sample_state(coin_state(HALF), 1, seed=0, count=-1)

    def test_zero_count(self):
        assert sample_state(coin_state(HALF), 1, seed=0, count=0) == ()

    def test_sampler_draws_stay_in_fibers(self, rng):
        sampler = AncestralSampler(coin_state(Fraction(1, 3)), 5)
        assert all(0 <= sampler.draw(rng) < 32 for _ in range(100))


class TestSampleReport:
    """Test reports pairing frequencies with exact measures."""

    def test_cylinder_at_sampled_depth(self):
        cylinder = Clopen.from_literal(binary_prefix(), "3:5")
        report = sample_report(coin_state(HALF), 3, seed=11, count=400, clopen=cylinder)
        assert report.exact == Fraction(1, 8)
        assert report.count == 400
        assert report.hits == report.counts.get(5, 0)
        assert report.frequency == report.hits / 400
        assert sum(report.counts.values()) == 400

    def test_coarser_cylinder_is_refined(self):
        cylinder = Clopen.from_literal(binary_prefix(), "1:1")
        report = sample_report(coin_state(HALF), 3, seed=5, count=300, clopen=cylinder)
        assert report.exact == HALF
        assert report.hits == sum(1 for s in report.samples if s >= 4)

    def test_without_cylinder(self):
        report = sample_report(coin_state(HALF), 2, seed=0, count=10)
        assert report.hits is None
        assert report.frequency is None
        assert report.exact is None

    def test_cylinder_finer_than_depth(self):
        cylinder = Clopen.from_literal(binary_prefix(), "3:5")
        with pytest.raises(KernelValidationError, match="finer than the sampled depth"):
            sample_report(coin_state(HALF), 2, seed=0, count=10, clopen=cylinder)

    @pytest.mark.slow
    def test_frequency_matches_measure(self):
        cylinder = Clopen.from_literal(binary_prefix(), "3:5")
        report = sample_report(coin_state(HALF), 3, seed=0, count=100_000, clopen=cylinder)
        assert abs(report.frequency - 0.125) <= 0.01

    @pytest.mark.slow
    def test_biased_frequency_matches_measure(self):
        cylinder = Clopen.from_literal(binary_prefix(), "3:5")
        report = sample_report(
            coin_state(Fraction(1, 3)), 3, seed=42, count=100_000, clopen=cylinder
        )
        assert report.exact == Fraction(2, 27)
        assert abs(report.frequency - 2 / 27) <= 0.01

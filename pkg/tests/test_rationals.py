"""Tests for exact rational parsing and formatting."""

from fractions import Fraction

import pytest

from stonekernels.errors import KernelValidationError
from stonekernels.rationals import ONE, ZERO, format_rational, is_probability, to_rational


class TestToRational:
    """Test conversion of literals to fractions."""

    @pytest.mark.parametrize(
        ("value", "expected"),
        [
            ("1/2", Fraction(1, 2)),
            ("2/6", Fraction(1, 3)),
            (" 3/8 ", Fraction(3, 8)),
            ("1", ONE),
            (0, ZERO),
            (Fraction(5, 7), Fraction(5, 7)),
        ],
    )
    def test_accepts_exact_literals(self, value, expected):
        assert to_rational(value) == expected

    def test_rejects_floats(self):
        """A float already carries rounding error."""
        with pytest.raises(KernelValidationError, match="floating-point"):
            to_rational(0.5)

    def test_rejects_booleans(self):
        with pytest.raises(KernelValidationError, match="boolean"):
            to_rational(True)

    @pytest.mark.parametrize("text", ["half", "1/0", "", "1//2"])
    def test_rejects_malformed_strings(self, text):
        with pytest.raises(KernelValidationError, match="not a rational number"):
            to_rational(text)


class TestFormatRational:
    """Test the "p/q" text form."""

    def test_fraction(self):
        assert format_rational(Fraction(1, 8)) == "1/8"

    def test_integers_drop_the_denominator(self):
        assert format_rational(Fraction(4, 4)) == "1"
        assert format_rational(ZERO) == "0"

    def test_lowest_terms(self):
        assert format_rational(Fraction(6, 16)) == "3/8"


def test_is_probability():
    assert is_probability(ZERO)
    assert is_probability(ONE)
    assert is_probability(Fraction(1, 3))
    assert not is_probability(Fraction(-1, 3))
    assert not is_probability(Fraction(4, 3))

"""Exact rational values: parsing and the "p/q" text format.

All probabilities in stonekernels are :class:`fractions.Fraction` values. Fractions are
always in lowest terms with a positive denominator, so equality is exact and decidable.
"""

from fractions import Fraction

from .errors import KernelValidationError, format_program_error, format_validation_error

ZERO = Fraction(0)
ONE = Fraction(1)

RationalLike = Fraction | int | str


def to_rational(value: RationalLike) -> Fraction:
    """Convert an int, Fraction or "p/q" string to a Fraction.

    Floats (and bools) are rejected: a float already carries rounding error.

    Raises:
        KernelValidationError: If the value is a float or not a rational literal

    Examples:
        >>> to_rational("2/6")
        Fraction(1, 3)
        >>> to_rational(1)
        Fraction(1, 1)
    """
    if isinstance(value, bool):
        raise KernelValidationError(f"Expected a rational number, got boolean {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise KernelValidationError(format_program_error("float_probability", detail=repr(value)))
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise KernelValidationError(
                format_validation_error(
                    f"'{value}' is not a rational number",
                    example='"3/8" or "1"',
                    fix="Write rationals as integers or p/q with a non-zero denominator",
                )
            ) from None
    raise KernelValidationError(f"Expected a rational number, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1.

    Examples:
        >>> format_rational(Fraction(1, 8))
        '1/8'
        >>> format_rational(Fraction(4, 4))
        '1'
    """
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_probability(value: Fraction) -> bool:
    """True iff ``0 <= value <= 1``."""
    return ZERO <= value <= ONE

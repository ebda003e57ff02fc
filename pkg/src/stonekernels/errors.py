"""Exceptions and user-friendly error formatting.

This module provides the exception hierarchy shared by the algebra modules, the
program loader and the CLI, together with helpers that format messages with examples
and actionable fixes, so that a failing program file can be repaired without
consulting documentation.
"""


class StoneKernelsError(Exception):
    """Base class for every error raised deliberately by stonekernels."""


class KernelValidationError(StoneKernelsError, ValueError):
    """A value violates its invariants (non-stochastic row, bad index, bad clopen)."""


class SystemMismatchError(KernelValidationError):
    """Two objects or inverse systems that must agree do not."""


class DepthExceededError(StoneKernelsError):
    """An explicit table was queried beyond the depth it declares."""

    def __init__(self, what: str, level: int, max_depth: int) -> None:
        self.what = what
        self.level = level
        self.max_depth = max_depth
        super().__init__(
            format_validation_error(
                f"{what} is only declared up to level {max_depth}, level {level} requested",
                fix=f"Use --depth {max_depth} or less, or add more levels to the table",
            )
        )


class ProgramError(StoneKernelsError):
    """A program file or term could not be turned into a well-typed program.

    Attributes:
        line: 1-based source line, when known
        column: 1-based source column, when known
    """

    category = "program"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(self._render())

    def _render(self) -> str:
        if self.line is None:
            return f"{self.category} error: {self.message}"
        return f"{self.category} error at line {self.line}, column {self.column}: {self.message}"


class LexicalError(ProgramError):
    """A term contains a character sequence that is not a token."""

    category = "lexical"


class TermSyntaxError(ProgramError):
    """A term is made of valid tokens in an invalid order."""

    category = "syntax"


class UnknownNameError(ProgramError):
    """A term or declaration refers to a name that is not declared."""

    category = "unknown-name"


class TypeMismatchError(ProgramError):
    """A sequential composite joins a codomain to a different domain."""

    category = "type-mismatch"


class ProgramValidationError(ProgramError):
    """A program file fails schema or declaration validation."""

    category = "validation"


def format_validation_error(
    message: str,
    example: str | None = None,
    fix: str | None = None,
) -> str:
    """
    Format a user-friendly validation error with examples and fixes.

    Errors are kept concise (<5 lines when possible) and include:
    - Clear problem description
    - Example of correct usage (optional)
    - Actionable fix suggestion (optional)

    Args:
        message: Brief description of the error
        example: Example of correct usage (optional)
        fix: Suggestion for how to fix the issue (optional)

    Returns:
        Formatted error message string

    Examples:
        >>> err = format_validation_error(
        ...     "Row 0 sums to 3/4",
        ...     example='matrix: [["1/4", "3/4"]]',
        ...     fix="Make every row sum to exactly 1"
        ... )
        >>> print(err)
        Row 0 sums to 3/4
        <BLANKLINE>
        Example: matrix: [["1/4", "3/4"]]
        <BLANKLINE>
        Fix: Make every row sum to exactly 1
    """
    parts = [message]

    if example:
        parts.append(f"\nExample: {example}")

    if fix:
        parts.append(f"\nFix: {fix}")

    return "\n".join(parts)


def format_program_error(
    error_type: str,
    detail: str | None = None,
    context: dict[str, str] | None = None,
) -> str:
    """
    Format program-file loading errors with helpful examples.

    Args:
        error_type: Type of program error
        detail: Additional detail about the error
        context: Dictionary of context information

    Returns:
        Formatted error message

    Raises:
        ValueError: If error_type is not recognized
    """
    context = context or {}

    if error_type == "invalid_yaml":
        return format_validation_error(
            f"Invalid YAML syntax: {detail}",
            fix="Check indentation (use spaces, not tabs) and quote fractions like \"1/2\"",
        )

    elif error_type == "invalid_json":
        return format_validation_error(
            f"Invalid JSON syntax: {detail}",
            fix="Validate the JSON document; probabilities must be strings such as \"1/3\"",
        )

    elif error_type == "file_too_large":
        return format_validation_error(
            f"Program file too large: {detail}",
            fix="Split the program or use builtin families instead of explicit tables",
        )

    elif error_type == "unsupported_format":
        return format_validation_error(
            f"Unsupported program file extension: {detail}",
            fix="Use a .yaml, .yml or .json file",
        )

    elif error_type == "unknown_object":
        name = context.get("name", "?")
        return format_validation_error(
            f"Object '{name}' is not declared",
            example="objects:\n  X: 2\n  B: {family: binary_prefix}",
            fix=f"Declare '{name}' under 'objects' or use the builtin 'unit'",
        )

    elif error_type == "float_probability":
        return format_validation_error(
            f"Probability {detail} is a floating-point number",
            example='matrix: [["1/3", "2/3"]]',
            fix="Write probabilities as exact \"p/q\" strings or integers",
        )

    else:
        raise ValueError(f"Unknown program error type: {error_type}")

"""Tests for the error hierarchy and error formatting utilities."""

import pytest

from stonekernels.errors import (
    DepthExceededError,
    KernelValidationError,
    LexicalError,
    ProgramError,
    ProgramValidationError,
    StoneKernelsError,
    SystemMismatchError,
    TermSyntaxError,
    TypeMismatchError,
    UnknownNameError,
    format_program_error,
    format_validation_error,
)


class TestHierarchy:
    """Test which errors share base classes."""

    def test_kernel_errors_are_value_errors(self):
        assert issubclass(KernelValidationError, ValueError)
        assert issubclass(SystemMismatchError, KernelValidationError)
        assert issubclass(KernelValidationError, StoneKernelsError)

    @pytest.mark.parametrize(
        ("cls", "category"),
        [
            (LexicalError, "lexical"),
            (TermSyntaxError, "syntax"),
            (UnknownNameError, "unknown-name"),
            (TypeMismatchError, "type-mismatch"),
            (ProgramValidationError, "validation"),
        ],
    )
    def test_program_error_categories(self, cls, category):
        error = cls("bad", 2, 7)
        assert isinstance(error, ProgramError)
        assert str(error) == f"{category} error at line 2, column 7: bad"
        assert (error.line, error.column) == (2, 7)

    def test_program_error_without_position(self):
        assert str(ProgramValidationError("bad")) == "validation error: bad"

    def test_depth_exceeded(self):
        error = DepthExceededError("table", 5, 2)
        assert (error.what, error.level, error.max_depth) == ("table", 5, 2)
        assert "table is only declared up to level 2, level 5 requested" in str(error)
        assert "Fix: Use --depth 2 or less" in str(error)


class TestFormatValidationError:
    """Tests for format_validation_error function."""

    def test_message_only(self):
        assert format_validation_error("Row 0 sums to 3/4") == "Row 0 sums to 3/4"

    def test_message_with_example_and_fix(self):
        result = format_validation_error(
            "Row 0 sums to 3/4",
            example='matrix: [["1/4", "3/4"]]',
            fix="Make every row sum to 1",
        )
        assert result == (
            'Row 0 sums to 3/4\n\nExample: matrix: [["1/4", "3/4"]]\n\nFix: Make every row sum to 1'
        )


class TestFormatProgramError:
    """Tests for format_program_error function."""

    @pytest.mark.parametrize(
        ("error_type", "expected"),
        [
            ("invalid_yaml", "Invalid YAML syntax: oops"),
            ("invalid_json", "Invalid JSON syntax: oops"),
            ("file_too_large", "Program file too large: oops"),
            ("unsupported_format", "Unsupported program file extension: oops"),
            ("float_probability", "Probability oops is a floating-point number"),
        ],
    )
    def test_known_types(self, error_type, expected):
        result = format_program_error(error_type, detail="oops")
        assert result.startswith(expected)
        assert "Fix:" in result

    def test_unknown_object_uses_context(self):
        result = format_program_error("unknown_object", context={"name": "Z"})
        assert result.startswith("Object 'Z' is not declared")
        assert "Declare 'Z' under 'objects'" in result

    def test_unknown_type(self):
        with pytest.raises(ValueError, match="Unknown program error type"):
            format_program_error("mystery")

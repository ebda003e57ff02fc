"""Tests for program schema validation."""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from stonekernels.dsl.schemas import (
    BinaryPrefixObjectSchema,
    CoinStateSchema,
    ExplicitObjectSchema,
    LevelTableKernelSchema,
    MapKernelSchema,
    MatrixKernelSchema,
    ProductObjectSchema,
    format_error_location,
    get_validation_errors,
    validate_program,
)


class TestObjects:
    """Test object declarations."""

    def test_every_family(self):
        program = validate_program(
            {
                "objects": {
                    "X": 2,
                    "C": {"family": "constant", "size": 3},
                    "B": {"family": "binary_prefix"},
                    "T": {"family": "prefix", "arity": 3},
                    "P": {"family": "product", "factors": ["X", {"family": "binary_prefix"}]},
                    "S": {"family": "power", "factor": "X"},
                    "E": {"levels": [1, 2], "connects": [[0, 0]]},
                }
            }
        )
        assert program.objects["X"] == 2
        assert isinstance(program.objects["B"], BinaryPrefixObjectSchema)
        assert isinstance(program.objects["P"], ProductObjectSchema)
        assert isinstance(program.objects["P"].factors[1], BinaryPrefixObjectSchema)
        assert isinstance(program.objects["E"], ExplicitObjectSchema)

    def test_unknown_family(self):
        with pytest.raises(ValidationError):
            validate_program({"objects": {"X": {"family": "hilbert"}}})

    def test_negative_size(self):
        with pytest.raises(ValidationError):
            validate_program({"objects": {"X": -1}})

    def test_boolean_size(self):
        with pytest.raises(ValidationError):
            validate_program({"objects": {"X": True}})

    def test_prefix_arity(self):
        with pytest.raises(ValidationError):
            validate_program({"objects": {"T": {"family": "prefix", "arity": 1}}})

    @pytest.mark.parametrize(
        ("levels", "connects", "message"),
        [
            ([1, 2], [], "need 1 connect tables"),
            ([1, 2], [[0]], "has 1 entries"),
            ([1, 2], [[0, 1]], "maps outside level 0"),
            ([2, 2], [[0, 0]], "not surjective"),
        ],
    )
    def test_explicit_tables(self, levels, connects, message):
        errors = get_validation_errors(
            {"objects": {"E": {"family": "explicit", "levels": levels, "connects": connects}}}
        )
        assert len(errors) == 1
        assert message in errors[0]

    def test_unit_cannot_be_declared(self):
        errors = get_validation_errors({"objects": {"unit": 1}})
        assert any("builtin monoidal unit" in e for e in errors)

    def test_undeclared_factor(self):
        errors = get_validation_errors(
            {"objects": {"P": {"family": "product", "factors": ["X", "Y"]}}}
        )
        assert any("undeclared object 'X'" in e for e in errors)


class TestKernels:
    """Test kernel declarations."""

    def test_kernel_kinds(self):
        program = validate_program(
            {
                "objects": {"X": 2, "B": {"family": "binary_prefix"}},
                "kernels": {
                    "f": {"dom": "X", "cod": "X", "matrix": [["1/2", "1/2"], [0, 1]]},
                    "neg": {"dom": "X", "cod": "X", "map": [1, 0]},
                    "coin": {"state": "coin", "bias": "1/3", "cod": "B"},
                    "t": {
                        "dom": "unit",
                        "cod": "B",
                        "levels": [{"dom_level": 0, "matrix": [[1]]}],
                    },
                },
            }
        )
        assert isinstance(program.kernels["f"], MatrixKernelSchema)
        assert program.kernels["f"].matrix[0][0] == Fraction(1, 2)
        assert isinstance(program.kernels["neg"], MapKernelSchema)
        assert isinstance(program.kernels["coin"], CoinStateSchema)
        assert program.kernels["coin"].bias == Fraction(1, 3)
        assert isinstance(program.kernels["t"], LevelTableKernelSchema)

    def test_float_probabilities_are_rejected(self):
        errors = get_validation_errors(
            {"objects": {"X": 1}, "kernels": {"f": {"dom": "X", "cod": "X", "matrix": [[1.0]]}}}
        )
        assert len(errors) == 1
        assert "floating-point" in errors[0]
        assert errors[0].startswith("kernels.f")

    def test_undeclared_object(self):
        errors = get_validation_errors(
            {"objects": {"X": 2}, "kernels": {"f": {"dom": "X", "cod": "Z", "map": [0, 0]}}}
        )
        assert any("undeclared object 'Z'" in e for e in errors)

    def test_unknown_state(self):
        with pytest.raises(ValidationError):
            validate_program({"kernels": {"s": {"state": "dice", "cod": "unit"}}})

    def test_extra_fields_are_rejected(self):
        with pytest.raises(ValidationError):
            validate_program(
                {
                    "objects": {"X": 1},
                    "kernels": {"f": {"dom": "X", "cod": "X", "map": [0], "x": 1}},
                }
            )


class TestNames:
    """Test name rules across sections."""

    @pytest.mark.parametrize("name", ["copy", "id", "swap", "discard"])
    def test_keywords_cannot_be_declared(self, name):
        errors = get_validation_errors({"terms": {name: "f"}})
        assert any("is a keyword" in e for e in errors)

    def test_names_are_identifiers(self):
        errors = get_validation_errors({"objects": {"two words": 2}})
        assert any("not a valid name" in e for e in errors)

    def test_kernel_and_term_names_are_unique(self):
        errors = get_validation_errors(
            {
                "objects": {"X": 1},
                "kernels": {"f": {"dom": "X", "cod": "X", "map": [0]}},
                "terms": {"f": "id[X]"},
            }
        )
        assert any("both as kernels and terms: f" in e for e in errors)

    def test_unknown_section(self):
        assert get_validation_errors({"macros": {}})

    def test_valid_program_has_no_errors(self, coins_data):
        assert get_validation_errors(coins_data) == []


def test_format_error_location():
    assert format_error_location(("kernels", "f", "matrix", 0, 1)) == "kernels.f.matrix[0][1]"
    assert format_error_location(()) == "program"

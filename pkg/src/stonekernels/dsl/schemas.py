"""Program file schema validation using Pydantic.

A program file has three sections, all optional:

* ``objects`` - finite sizes or inverse-system families
* ``kernels`` - explicit matrices, level tables, deterministic maps or builtin states
* ``terms`` - named term strings

Examples:
    >>> from stonekernels.dsl.schemas import validate_program
    >>> program = validate_program({
    ...     "objects": {"X": 2},
    ...     "kernels": {"f": {"dom": "X", "cod": "X", "matrix": [["1/2", "1/2"], [0, 1]]}},
    ...     "terms": {"law": "f ; f"},
    ... })
    >>> sorted(program.kernels)
    ['f']
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Annotated, Any, Literal

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Discriminator,
    Field,
    Tag,
    ValidationError,
    field_validator,
    model_validator,
)

from ..errors import format_program_error
from ..rationals import to_rational

RESERVED_OBJECT = "unit"
KEYWORDS = {"id", "copy", "discard", "swap"}
IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _parse_probability(value: Any) -> Fraction:
    if isinstance(value, float):
        raise ValueError(format_program_error("float_probability", detail=repr(value)))
    return to_rational(value)


Probability = Annotated[Fraction, BeforeValidator(_parse_probability)]
Matrix = list[list[Probability]]


# Objects


class ConstantObjectSchema(BaseModel):
    """A finite set, as a constant system."""

    family: Literal["constant"]
    size: Annotated[int, Field(ge=0)]

    model_config = ConfigDict(extra="forbid")


class BinaryPrefixObjectSchema(BaseModel):
    """The Cantor space of bit streams."""

    family: Literal["binary_prefix"]

    model_config = ConfigDict(extra="forbid")


class PrefixObjectSchema(BaseModel):
    """Streams over an alphabet of ``arity`` letters."""

    family: Literal["prefix"]
    arity: Annotated[int, Field(ge=2)]

    model_config = ConfigDict(extra="forbid")


class ProductObjectSchema(BaseModel):
    """Finite product of named or inline objects."""

    family: Literal["product"]
    factors: Annotated[list[ObjectRef], Field(min_length=1)]

    model_config = ConfigDict(extra="forbid")


class PowerObjectSchema(BaseModel):
    """Countable product of copies of one object."""

    family: Literal["power"]
    factor: ObjectRef

    model_config = ConfigDict(extra="forbid")


class ExplicitObjectSchema(BaseModel):
    """Explicit level sizes and connect tables.

    Attributes:
        levels: ``|X_0|, |X_1|, ...``
        connects: ``connects[n][e]`` is the image in ``X_n`` of ``e ∈ X_{n+1}``
        stabilize: Repeat the last level with identity connects beyond the table
    """

    family: Literal["explicit"] = "explicit"
    levels: Annotated[list[Annotated[int, Field(ge=0)]], Field(min_length=1)]
    connects: list[list[int]] = Field(default_factory=list)
    stabilize: bool = False

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def validate_connects(self) -> ExplicitObjectSchema:
        """Each connect must be a surjection between consecutive levels."""
        if len(self.connects) != len(self.levels) - 1:
            raise ValueError(
                f"{len(self.levels)} levels need {len(self.levels) - 1} connect tables, "
                f"got {len(self.connects)}"
            )
        for n, table in enumerate(self.connects):
            lower, upper = self.levels[n], self.levels[n + 1]
            if len(table) != upper:
                raise ValueError(
                    f"connects[{n}] has {len(table)} entries, level {n + 1} has {upper}"
                )
            if any(not 0 <= e < lower for e in table):
                raise ValueError(f"connects[{n}] maps outside level {n} (size {lower})")
            if len(set(table)) != lower:
                raise ValueError(f"connects[{n}] is not surjective onto level {n}")
        return self


def _object_tag(value: Any) -> str:
    if isinstance(value, bool):
        return "invalid"
    if isinstance(value, int):
        return "finite"
    if isinstance(value, str):
        return "name"
    if isinstance(value, dict):
        return str(value.get("family", "explicit"))
    return str(getattr(value, "family", "invalid"))


ObjectSpec = Annotated[
    Annotated[Annotated[int, Field(ge=0)], Tag("finite")]
    | Annotated[ConstantObjectSchema, Tag("constant")]
    | Annotated[BinaryPrefixObjectSchema, Tag("binary_prefix")]
    | Annotated[PrefixObjectSchema, Tag("prefix")]
    | Annotated[ProductObjectSchema, Tag("product")]
    | Annotated[PowerObjectSchema, Tag("power")]
    | Annotated[ExplicitObjectSchema, Tag("explicit")],
    Discriminator(_object_tag),
]

ObjectRef = Annotated[
    Annotated[str, Tag("name")]
    | Annotated[Annotated[int, Field(ge=0)], Tag("finite")]
    | Annotated[ConstantObjectSchema, Tag("constant")]
    | Annotated[BinaryPrefixObjectSchema, Tag("binary_prefix")]
    | Annotated[PrefixObjectSchema, Tag("prefix")]
    | Annotated[ProductObjectSchema, Tag("product")]
    | Annotated[PowerObjectSchema, Tag("power")]
    | Annotated[ExplicitObjectSchema, Tag("explicit")],
    Discriminator(_object_tag),
]

ProductObjectSchema.model_rebuild()
PowerObjectSchema.model_rebuild()


# Kernels


class MatrixKernelSchema(BaseModel):
    """An explicit matrix between finite objects."""

    dom: str
    cod: str
    matrix: Matrix

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)


class MapKernelSchema(BaseModel):
    """A deterministic kernel given by the table of a function between finite objects."""

    dom: str
    cod: str
    map: list[Annotated[int, Field(ge=0)]]

    model_config = ConfigDict(extra="forbid")


class LevelEntrySchema(BaseModel):
    dom_level: Annotated[int, Field(ge=0)]
    matrix: Matrix

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)


class LevelTableKernelSchema(BaseModel):
    """A kernel between systems given level by level, ``levels[j]`` for ``Y_j``."""

    dom: str
    cod: str
    levels: Annotated[list[LevelEntrySchema], Field(min_length=1)]

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)


class FunctionLevelSchema(BaseModel):
    dom_level: Annotated[int, Field(ge=0)]
    map: list[Annotated[int, Field(ge=0)]]

    model_config = ConfigDict(extra="forbid")


class FunctionLevelsKernelSchema(BaseModel):
    """A deterministic kernel between systems given by level function tables."""

    dom: str
    cod: str
    function_levels: Annotated[list[FunctionLevelSchema], Field(min_length=1)]

    model_config = ConfigDict(extra="forbid")


class CoinStateSchema(BaseModel):
    """Independent coins with ``P(1) = bias`` on ``constant(2)``, a bit stream or power(2)."""

    state: Literal["coin"]
    bias: Probability
    cod: str

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)


class PointStateSchema(BaseModel):
    """The point mass on the least thread through ``element`` of level ``level``."""

    state: Literal["point"]
    element: Annotated[int, Field(ge=0)]
    level: Annotated[int, Field(ge=0)] = 0
    cod: str

    model_config = ConfigDict(extra="forbid")


def _kernel_tag(value: Any) -> str:
    if isinstance(value, dict):
        if "state" in value:
            return str(value["state"])
        for key in ("function_levels", "levels", "map"):
            if key in value:
                return key
        return "matrix"
    for tag, cls in _KERNEL_CLASSES.items():
        if isinstance(value, cls):
            return tag
    return "matrix"


KernelSpec = Annotated[
    Annotated[MatrixKernelSchema, Tag("matrix")]
    | Annotated[MapKernelSchema, Tag("map")]
    | Annotated[LevelTableKernelSchema, Tag("levels")]
    | Annotated[FunctionLevelsKernelSchema, Tag("function_levels")]
    | Annotated[CoinStateSchema, Tag("coin")]
    | Annotated[PointStateSchema, Tag("point")],
    Discriminator(_kernel_tag),
]

_KERNEL_CLASSES: dict[str, type[BaseModel]] = {
    "matrix": MatrixKernelSchema,
    "map": MapKernelSchema,
    "levels": LevelTableKernelSchema,
    "function_levels": FunctionLevelsKernelSchema,
    "coin": CoinStateSchema,
    "point": PointStateSchema,
}


def _object_names_in(spec: Any) -> list[str]:
    if isinstance(spec, str):
        return [spec]
    if isinstance(spec, ProductObjectSchema):
        return [name for factor in spec.factors for name in _object_names_in(factor)]
    if isinstance(spec, PowerObjectSchema):
        return _object_names_in(spec.factor)
    return []


class ProgramSchema(BaseModel):
    """Schema for a complete program file.

    Attributes:
        objects: Declared objects by name (``unit`` is builtin)
        kernels: Declared kernels by name
        terms: Named term strings
    """

    objects: dict[str, ObjectSpec] = Field(default_factory=dict)
    kernels: dict[str, KernelSpec] = Field(default_factory=dict)
    terms: dict[str, str] = Field(default_factory=dict)

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    @field_validator("objects", "kernels", "terms")
    @classmethod
    def validate_names(cls, v: dict[str, Any]) -> dict[str, Any]:
        """Names are identifiers and not keywords."""
        for name in v:
            if not IDENTIFIER.match(name):
                raise ValueError(f"'{name}' is not a valid name (letters, digits, underscores)")
            if name in KEYWORDS:
                raise ValueError(f"'{name}' is a keyword and cannot be declared")
        return v

    @field_validator("objects")
    @classmethod
    def validate_unit_not_declared(cls, v: dict[str, Any]) -> dict[str, Any]:
        if RESERVED_OBJECT in v:
            raise ValueError(
                f"'{RESERVED_OBJECT}' is the builtin monoidal unit and cannot be declared"
            )
        return v

    @model_validator(mode="after")
    def validate_references(self) -> ProgramSchema:
        """Names are unique across kernels and terms; object references resolve."""
        clash = sorted(set(self.kernels) & set(self.terms))
        if clash:
            raise ValueError(f"Names declared both as kernels and terms: {', '.join(clash)}")

        known = set(self.objects) | {RESERVED_OBJECT}
        for name, spec in self.objects.items():
            for ref in _object_names_in(spec):
                if ref not in known:
                    raise ValueError(f"Object '{name}' refers to undeclared object '{ref}'")
        for name, kernel in self.kernels.items():
            for ref in (getattr(kernel, "dom", None), kernel.cod):
                if ref is not None and ref not in known:
                    raise ValueError(
                        f"Kernel '{name}' refers to undeclared object '{ref}'. "
                        f"Declared: {', '.join(sorted(known))}"
                    )
        return self


def validate_program(data: dict[str, Any]) -> ProgramSchema:
    """
    Validate a program dictionary against the schema.

    Raises:
        ValidationError: If the program is invalid
    """
    return ProgramSchema.model_validate(data)


def get_validation_errors(data: dict[str, Any]) -> list[str]:
    """Human-readable validation messages, each prefixed by its field path (empty if valid)."""
    try:
        ProgramSchema.model_validate(data)
        return []
    except ValidationError as e:
        return [format_error_location(err["loc"]) + ": " + err["msg"] for err in e.errors()]


def format_error_location(loc: tuple[Any, ...]) -> str:
    """``('kernels', 'f', 'matrix', 0, 1)`` → ``kernels.f.matrix[0][1]``."""
    text = ""
    for part in loc:
        if isinstance(part, int):
            text += f"[{part}]"
        else:
            text += ("." if text else "") + str(part)
    return text or "program"

"""Load kernel programs from YAML/JSON files."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ValidationError

from .. import finker
from ..errors import (
    KernelValidationError,
    ProgramValidationError,
    UnknownNameError,
    format_program_error,
)
from ..finker import FinKernel
from ..logging_config import get_logger
from ..proker import (
    ProKernel,
    coin_state,
    from_finite,
    from_level_table,
    point_state,
)
from ..settings import get_settings
from ..stone import (
    UNIT_SYSTEM,
    ConstantSystem,
    ExplicitSystem,
    InverseSystem,
    PrefixSystem,
    power,
    product,
    thread_through,
)
from .grammar import parse_term
from .schemas import (
    RESERVED_OBJECT,
    BinaryPrefixObjectSchema,
    CoinStateSchema,
    ConstantObjectSchema,
    ExplicitObjectSchema,
    FunctionLevelsKernelSchema,
    LevelTableKernelSchema,
    MapKernelSchema,
    MatrixKernelSchema,
    PointStateSchema,
    PowerObjectSchema,
    PrefixObjectSchema,
    ProductObjectSchema,
    ProgramSchema,
    format_error_location,
    validate_program,
)
from .terms import Term

log = get_logger(__name__)


@dataclass
class Program:
    """
    A loaded program: resolved objects, kernels and parsed named terms.

    Attributes:
        objects: Declared objects as inverse systems (``unit`` is implicit)
        kernels: Declared kernels as ProKernels
        terms: Named terms, parsed
        term_sources: The source text of each named term
        declarations: Object declarations as written, for re-export
        source: Path of the file the program came from, if any
    """

    objects: dict[str, InverseSystem] = field(default_factory=dict)
    kernels: dict[str, ProKernel] = field(default_factory=dict)
    terms: dict[str, Term] = field(default_factory=dict)
    term_sources: dict[str, str] = field(default_factory=dict)
    declarations: dict[str, Any] = field(default_factory=dict)
    source: str | None = None

    def object(
        self, name: str, line: int | None = None, column: int | None = None
    ) -> InverseSystem:
        """Resolve an object name; ``unit`` always resolves.

        Raises:
            UnknownNameError: If the object is not declared
        """
        if name == RESERVED_OBJECT:
            return UNIT_SYSTEM
        if name not in self.objects:
            raise UnknownNameError(
                format_program_error("unknown_object", context={"name": name}), line, column
            )
        return self.objects[name]

    def kernel(self, name: str, line: int | None = None, column: int | None = None) -> ProKernel:
        """Resolve a kernel name.

        Raises:
            UnknownNameError: If no kernel has that name
        """
        if name not in self.kernels:
            declared = ", ".join(sorted(self.kernels)) or "none"
            raise UnknownNameError(
                f"kernel '{name}' is not declared (declared kernels: {declared})", line, column
            )
        return self.kernels[name]

    def resolve_term(self, reference: str) -> Term:
        """A named term, or else the reference parsed as term source text."""
        if reference in self.terms:
            return self.terms[reference]
        return parse_term(reference)

    def object_name(self, system: InverseSystem) -> str:
        """The declared name of a system, or its description."""
        if system == UNIT_SYSTEM:
            return RESERVED_OBJECT
        for name, declared in self.objects.items():
            if declared == system:
                return name
        return system.describe()


class ProgramLoader:
    """
    Load and resolve kernel programs from files or dictionaries.

    Examples:
        >>> loader = ProgramLoader()
        >>> program = loader.load_from_file("coins.yaml")
        >>> sorted(program.kernels)
        ['coin', 'flip']
    """

    def __init__(self, *, max_bytes: int | None = None) -> None:
        self.max_bytes = max_bytes if max_bytes is not None else get_settings().max_program_bytes

    def load_from_file(self, program_path: str | Path) -> Program:
        """
        Load a program from a YAML or JSON file.

        Raises:
            FileNotFoundError: If the file does not exist
            ProgramValidationError: If the file is too large, malformed or invalid
        """
        path = Path(program_path)
        log.debug("loading_program_file", program_path=str(path), format=path.suffix)

        if not path.exists():
            log.error("program_file_not_found", program_path=str(path))
            raise FileNotFoundError(f"Program file not found: {program_path}")

        file_size = path.stat().st_size
        if file_size > self.max_bytes:
            log.error(
                "program_file_too_large",
                program_path=str(path),
                size_bytes=file_size,
                max_bytes=self.max_bytes,
            )
            raise ProgramValidationError(
                format_program_error(
                    "file_too_large", detail=f"{file_size} bytes (max: {self.max_bytes})"
                )
            )

        text = path.read_text(encoding="utf-8")
        if path.suffix in (".yaml", ".yml"):
            try:
                data = yaml.safe_load(text)
            except yaml.YAMLError as e:
                mark = getattr(e, "problem_mark", None)
                raise ProgramValidationError(
                    format_program_error("invalid_yaml", detail=str(getattr(e, "problem", e))),
                    mark.line + 1 if mark else None,
                    mark.column + 1 if mark else None,
                ) from None
        elif path.suffix == ".json":
            try:
                data = json.loads(text)
            except json.JSONDecodeError as e:
                raise ProgramValidationError(
                    format_program_error("invalid_json", detail=e.msg), e.lineno, e.colno
                ) from None
        else:
            log.error("unsupported_file_format", format=path.suffix, program_path=str(path))
            raise ProgramValidationError(
                format_program_error("unsupported_format", detail=path.suffix)
            )

        program = self.load_from_dict(data if data is not None else {}, source=str(path))
        log.info(
            "program_loaded",
            program_path=str(path),
            objects=len(program.objects),
            kernels=len(program.kernels),
            terms=len(program.terms),
        )
        return program

    def load_from_dict(self, data: Any, source: str | None = None) -> Program:
        """
        Validate and resolve a program dictionary.

        Raises:
            ProgramValidationError: On schema errors, unknown or cyclic object references,
                or kernels that fail validation
            LexicalError, TermSyntaxError: If a named term does not parse
        """
        if not isinstance(data, dict):
            raise ProgramValidationError(
                "A program file must contain a mapping with objects/kernels/terms"
            )
        try:
            schema = validate_program(data)
        except ValidationError as e:
            messages = [f"{format_error_location(err['loc'])}: {err['msg']}" for err in e.errors()]
            log.debug("program_schema_invalid", errors=messages)
            raise ProgramValidationError("invalid program\n  " + "\n  ".join(messages)) from None

        program = Program(source=source)
        _ObjectResolver(schema, program).resolve_all()
        program.declarations = {
            name: spec.model_dump(mode="json") if isinstance(spec, BaseModel) else spec
            for name, spec in schema.objects.items()
        }
        for name, spec in schema.kernels.items():
            try:
                program.kernels[name] = _build_kernel(name, spec, program)
            except KernelValidationError as e:
                raise ProgramValidationError(f"kernels.{name}: {e}") from None
        for name, text in schema.terms.items():
            program.terms[name] = parse_term(text)
            program.term_sources[name] = text
        return program


class _ObjectResolver:
    """Resolves object specs to systems, following named references and detecting cycles."""

    def __init__(self, schema: ProgramSchema, program: Program) -> None:
        self.schema = schema
        self.program = program
        self.in_progress: list[str] = []

    def resolve_all(self) -> None:
        for name in self.schema.objects:
            self.named(name)

    def named(self, name: str) -> InverseSystem:
        if name == RESERVED_OBJECT:
            return UNIT_SYSTEM
        if name in self.program.objects:
            return self.program.objects[name]
        if name in self.in_progress:
            cycle = " -> ".join([*self.in_progress[self.in_progress.index(name) :], name])
            raise ProgramValidationError(f"objects: cyclic definition {cycle}")
        self.in_progress.append(name)
        try:
            system = self.spec(self.schema.objects[name], name)
        except KernelValidationError as e:
            raise ProgramValidationError(f"objects.{name}: {e}") from None
        self.in_progress.pop()
        self.program.objects[name] = system
        return system

    def spec(self, spec: Any, name: str | None = None) -> InverseSystem:
        match spec:
            case str():
                return self.named(spec)
            case int():
                return ConstantSystem(spec)
            case ConstantObjectSchema(size=size):
                return ConstantSystem(size)
            case BinaryPrefixObjectSchema():
                return PrefixSystem(2)
            case PrefixObjectSchema(arity=arity):
                return PrefixSystem(arity)
            case ProductObjectSchema(factors=factors):
                return product([self.spec(f) for f in factors])
            case PowerObjectSchema(factor=factor):
                return power(self.spec(factor))
            case ExplicitObjectSchema():
                return ExplicitSystem(
                    spec.levels, spec.connects, stabilize=spec.stabilize, name=name
                )
        raise ProgramValidationError(f"Unsupported object specification: {spec!r}")


def _finite_size(program: Program, name: str, role: str) -> int:
    system = program.object(name)
    if not system.is_constant:
        raise KernelValidationError(
            f"{role} '{name}' of an explicit matrix must be a finite object"
        )
    return system.level_size(0)


def _build_kernel(name: str, spec: Any, program: Program) -> ProKernel:
    match spec:
        case MatrixKernelSchema():
            dom = _finite_size(program, spec.dom, "domain")
            cod = _finite_size(program, spec.cod, "codomain")
            matrix = FinKernel.from_rows(spec.matrix, cod)
            if matrix.dom.size != dom:
                raise KernelValidationError(
                    f"matrix has {matrix.dom.size} rows but '{spec.dom}' has {dom} elements"
                )
            return _declared(
                from_finite(matrix, name=name), program.object(spec.dom), program.object(spec.cod)
            )
        case MapKernelSchema():
            dom = _finite_size(program, spec.dom, "domain")
            cod = _finite_size(program, spec.cod, "codomain")
            matrix = finker.from_function(spec.map, dom, cod)
            return _declared(
                from_finite(matrix, name=name), program.object(spec.dom), program.object(spec.cod)
            )
        case LevelTableKernelSchema():
            dom_sys, cod_sys = program.object(spec.dom), program.object(spec.cod)
            levels = [
                (entry.dom_level, FinKernel.from_rows(entry.matrix, cod_sys.level_size(j)))
                for j, entry in enumerate(spec.levels)
            ]
            return from_level_table(dom_sys, cod_sys, levels, name=name)
        case FunctionLevelsKernelSchema():
            dom_sys, cod_sys = program.object(spec.dom), program.object(spec.cod)
            levels = [
                (
                    entry.dom_level,
                    finker.from_function(
                        entry.map, dom_sys.level_size(entry.dom_level), cod_sys.level_size(j)
                    ),
                )
                for j, entry in enumerate(spec.function_levels)
            ]
            return from_level_table(dom_sys, cod_sys, levels, name=name)
        case CoinStateSchema():
            state = coin_state(spec.bias, program.object(spec.cod))
            return _declared(state, UNIT_SYSTEM, program.object(spec.cod), name)
        case PointStateSchema():
            system = program.object(spec.cod)
            state = point_state(system, thread_through(system, spec.level, spec.element))
            return _declared(state, UNIT_SYSTEM, system, name)
    raise KernelValidationError(f"Unsupported kernel specification for '{name}'")


def _declared(
    kernel: ProKernel, dom: InverseSystem, cod: InverseSystem, name: str | None = None
) -> ProKernel:
    """Rebind a kernel to the declared systems (equal in structure, possibly other objects)."""
    return ProKernel(
        dom,
        cod,
        kernel.dom_level,
        kernel.producer,
        max_depth=kernel.max_depth,
        name=name or kernel.name,
    )


def load_program(path: str | Path) -> Program:
    """Convenience wrapper around :meth:`ProgramLoader.load_from_file`."""
    return ProgramLoader().load_from_file(path)

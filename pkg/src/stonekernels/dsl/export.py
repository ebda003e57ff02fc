"""Write kernels back out as program files.

The ``conditional`` command uses this to save a computed conditional as a level-table
kernel next to the object declarations it needs, so the output loads like any other
program.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from ..errors import KernelValidationError, ProgramValidationError, format_program_error
from ..logging_config import get_logger
from ..proker import ProKernel, conditional, equal_at_depth, recompose_conditional
from ..rationals import format_rational
from ..stone import UNIT_SYSTEM, ConstantSystem, InverseSystem, ProductSystem, product
from .loader import Program

log = get_logger(__name__)


def object_reference(program: Program, system: InverseSystem) -> str | int | dict[str, Any]:
    """How ``system`` is written in a program file: its declared name, a size, or a product.

    Raises:
        KernelValidationError: If the system has no written form in terms of ``program``
    """
    if system == UNIT_SYSTEM:
        return "unit"
    for name, declared in program.objects.items():
        if declared == system:
            return name
    if isinstance(system, ConstantSystem):
        return system.size
    if isinstance(system, ProductSystem):
        return {
            "family": "product",
            "factors": [object_reference(program, f) for f in system.factors],
        }
    raise KernelValidationError(f"{system.describe()} has no declaration in this program")


def split_codomain(kernel: ProKernel) -> tuple[InverseSystem, InverseSystem]:
    """``(Y, L)`` for a kernel into ``Y × L``: the first factor and the product of the rest.

    Raises:
        KernelValidationError: If the codomain is not a product of at least two factors
    """
    cod = kernel.cod
    if not isinstance(cod, ProductSystem) or len(cod.factors) < 2:
        raise KernelValidationError(
            f"A conditional needs a codomain of the form Y × L, got {cod.describe()}"
        )
    rest = cod.factors[1:]
    return cod.factors[0], rest[0] if len(rest) == 1 else product(list(rest))


@dataclass(frozen=True)
class ConditionalResult:
    """A conditional ``k : X × Y ⇝ L`` of ``p``, checked by recomposition.

    Attributes:
        kernel: The conditional
        given: The conditioned-on factor ``Y``
        target: The remaining factor ``L``
        reconstructs: Whether recomposing ``k`` with the marginal gives back ``p``
    """

    kernel: ProKernel
    given: InverseSystem
    target: InverseSystem
    reconstructs: bool


def conditional_of(p: ProKernel, depth: int) -> ConditionalResult:
    """Condition ``p : X ⇝ Y × L`` on ``Y`` and verify the reconstruction up to ``depth``."""
    y_sys, l_sys = split_codomain(p)
    k = conditional(p, y_sys, l_sys)
    reconstructs = equal_at_depth(recompose_conditional(p, k, y_sys, l_sys), p, depth)
    return ConditionalResult(k, y_sys, l_sys, reconstructs)


def _matrix(kernel: ProKernel, level: int) -> list[list[str]]:
    return [[format_rational(v) for v in row] for row in kernel.level(level).entries]


def level_table_document(
    program: Program, kernel: ProKernel, depth: int, name: str
) -> dict[str, Any]:
    """A program document declaring ``kernel`` as a level table for levels ``0..depth``.

    Objects that the kernel's domain and codomain need but the program does not declare
    are added as ``<name>_dom`` / ``<name>_cod``.
    """
    objects = dict(program.declarations)
    ends: dict[str, str] = {}
    for role, system in (("dom", kernel.dom), ("cod", kernel.cod)):
        ref = object_reference(program, system)
        if isinstance(ref, str):
            ends[role] = ref
        else:
            ends[role] = f"{name}_{role}"
            objects[ends[role]] = ref
    levels = [
        {"dom_level": kernel.source_level(j), "matrix": _matrix(kernel, j)}
        for j in range(depth + 1)
    ]
    return {
        "objects": objects,
        "kernels": {name: {"dom": ends["dom"], "cod": ends["cod"], "levels": levels}},
    }


def save_program_document(document: dict[str, Any], output_path: str | Path) -> Path:
    """Write a program document as YAML or JSON, chosen by the file extension.

    Raises:
        ProgramValidationError: If the extension is neither YAML nor JSON
    """
    path = Path(output_path)
    if path.suffix in (".yaml", ".yml"):
        text = yaml.safe_dump(document, sort_keys=False)
    elif path.suffix == ".json":
        text = json.dumps(document, indent=2) + "\n"
    else:
        raise ProgramValidationError(
            format_program_error("unsupported_format", detail=path.suffix)
        )
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    log.info("program_written", output_path=str(path), kernels=len(document.get("kernels", {})))
    return path

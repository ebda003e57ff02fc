"""Conditional command implementation."""

from pathlib import Path
from typing import Annotated

import typer

from ...dsl.evaluator import denote
from ...dsl.export import conditional_of, level_table_document, save_program_document
from ...dsl.terms import print_term
from ..context import AppContext
from ..decorators import EXIT_PROPERTY_FAILED, handle_command_exception
from ..output import (
    ConditionalOutputJson,
    matrix_json,
    output_json,
    print_error,
    print_plain,
    print_success,
)
from ..types import DepthOption, JsonOption, ProgramFileArg, TermOption


def conditional_command(
    program_file: ProgramFileArg,
    term: TermOption,
    depth: DepthOption = None,
    out: Annotated[
        Path | None,
        typer.Option("--out", "-o", help="Write the conditional as a program file (YAML/JSON)"),
    ] = None,
    name: Annotated[
        str, typer.Option("--name", help="Kernel name used in the written program")
    ] = "conditional",
    json_output: JsonOption = False,
) -> None:
    """
    Condition a kernel X ⇝ Y × L on Y, giving X × Y ⇝ L.

    Y is the first factor of the codomain and L the product of the rest. Fibers of
    zero mass get a point mass. The result is checked by recomposing it with the
    Y-marginal; a mismatch exits with 1.

    [bold]Examples:[/bold]

      stonekernels conditional joint.yaml --term p --depth 4 --out cond.yaml
    """
    ctx = AppContext()
    log = ctx.logger
    level = ctx.depth(depth)

    try:
        program = ctx.load(program_file)
        tree = program.resolve_term(term)
        result = conditional_of(denote(program, tree), level)
        levels = [matrix_json(result.kernel.level(j)) for j in range(level + 1)]
        written = None
        if out is not None:
            document = level_table_document(program, result.kernel, level, name)
            written = save_program_document(document, out)
        log.info(
            "conditional_computed",
            term=print_term(tree),
            depth=level,
            reconstructs=result.reconstructs,
        )
    except typer.Exit:
        raise
    except Exception as e:
        handle_command_exception(
            e,
            "conditional",
            ctx.console,
            log,
            json_output,
            lambda msg: ConditionalOutputJson(status="error", errors=[msg]),
        )
        return

    if json_output:
        output_json(
            ConditionalOutputJson(
                status="success" if result.reconstructs else "failure",
                term=print_term(tree),
                depth=level,
                given=program.object_name(result.given),
                target=program.object_name(result.target),
                reconstructs=result.reconstructs,
                output_path=str(written) if written else None,
                levels=levels,
            ),
            ctx.console,
        )
    else:
        for j in range(level + 1):
            ctx.console.print(f"[bold]level {j}[/bold]")
            print_plain(result.kernel.level(j).render(), ctx.console)
        if written is not None:
            print_success(f"Conditional written: {written}", ctx.console)

    if not result.reconstructs:
        if not json_output:
            print_error("recomposing the conditional does not give back the kernel", ctx.console)
        raise typer.Exit(code=EXIT_PROPERTY_FAILED)

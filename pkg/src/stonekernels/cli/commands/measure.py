"""Measure command implementation."""

from typing import Annotated

import typer

from ...dsl.evaluator import denote
from ...proker import clopen_measure
from ...rationals import format_rational
from ...stone import Clopen
from ..context import AppContext
from ..decorators import handle_command_exception
from ..output import MeasureOutputJson, output_json, print_plain
from ..types import JsonOption, ProgramFileArg, StateOption

ClopenOption = Annotated[
    str,
    typer.Option(
        "--clopen",
        "-c",
        help='Cylinder as "LEVEL:e1,e2,..." with level-set element indices, e.g. "3:5"',
    ),
]


def measure_command(
    program_file: ProgramFileArg,
    state: StateOption,
    clopen: ClopenOption,
    json_output: JsonOption = False,
) -> None:
    """
    Print the exact measure of a cylinder under a state.

    On binary_prefix systems element e of level n is the n-bit word with big-endian
    value e, so "3:5" is the cylinder of streams starting 101.

    [bold]Examples:[/bold]

      stonekernels measure coins.yaml --state coin --clopen 3:5
    """
    ctx = AppContext()

    try:
        program = ctx.load(program_file)
        kernel = denote(program, program.resolve_term(state))
        cylinder = Clopen.from_literal(kernel.cod, clopen)
        value = clopen_measure(kernel, cylinder)
        ctx.logger.info("measure_computed", state=state, clopen=cylinder.literal())
    except typer.Exit:
        raise
    except Exception as e:
        handle_command_exception(
            e,
            "measure",
            ctx.console,
            ctx.logger,
            json_output,
            lambda msg: MeasureOutputJson(status="error", errors=[msg]),
        )
        return

    if json_output:
        output_json(
            MeasureOutputJson(
                status="success",
                state=state,
                clopen=cylinder.literal(),
                measure=format_rational(value),
            ),
            ctx.console,
        )
    else:
        print_plain(format_rational(value), ctx.console)

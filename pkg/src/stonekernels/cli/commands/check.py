"""check-eq and check-det command implementations."""

from typing import Annotated, Literal

import typer

from ...dsl.evaluator import denote
from ...proker import LevelDifference, compare_at_depth, determinism_witness
from ...rationals import format_rational
from ..context import AppContext
from ..decorators import EXIT_PROPERTY_FAILED, handle_command_exception
from ..output import (
    CheckOutputJson,
    output_json,
    print_error,
    print_success,
    witness_json,
)
from ..types import DepthOption, JsonOption, ProgramFileArg, TermOption


def _report(
    ctx: AppContext,
    check: Literal["equality", "determinism"],
    depth: int,
    diff: LevelDifference | None,
    holds_message: str,
    json_output: bool,
    failure_message: str | None = None,
) -> None:
    if json_output:
        output_json(
            CheckOutputJson(
                status="success" if diff is None else "failure",
                check=check,
                depth=depth,
                holds=diff is None,
                witness=witness_json(diff),
            ),
            ctx.console,
        )
    elif diff is None:
        print_success(holds_message, ctx.console)
    else:
        print_error(failure_message or diff.describe(), ctx.console)
    if diff is not None:
        ctx.logger.info(f"{check}_check_failed", depth=depth, level=diff.level)
        raise typer.Exit(code=EXIT_PROPERTY_FAILED)


def check_eq_command(
    program_file: ProgramFileArg,
    left: Annotated[str, typer.Option("--left", "-l", help="Left-hand term")],
    right: Annotated[str, typer.Option("--right", "-r", help="Right-hand term")],
    depth: DepthOption = None,
    json_output: JsonOption = False,
) -> None:
    """
    Check that two terms agree at every level up to a depth.

    Exits with 1 and prints the first differing level and entry when they do not.

    [bold]Examples:[/bold]

      stonekernels check-eq coins.yaml --left "copy[X] ; (id[X] (x) discard[X])" --right "id[X]"
    """
    ctx = AppContext()
    level = ctx.depth(depth)

    try:
        program = ctx.load(program_file)
        f = denote(program, program.resolve_term(left))
        g = denote(program, program.resolve_term(right))
        diff = compare_at_depth(f, g, level)
    except typer.Exit:
        raise
    except Exception as e:
        handle_command_exception(
            e,
            "check_eq",
            ctx.console,
            ctx.logger,
            json_output,
            lambda msg: CheckOutputJson(status="error", check="equality", errors=[msg]),
        )
        return

    _report(ctx, "equality", level, diff, f"equal up to depth {level}", json_output)


def check_det_command(
    program_file: ProgramFileArg,
    term: TermOption,
    depth: DepthOption = None,
    json_output: JsonOption = False,
) -> None:
    """
    Check that a term is deterministic (0/1 entries) at every level up to a depth.

    Exits with 1 and prints the first entry strictly between 0 and 1 otherwise.

    [bold]Examples:[/bold]

      stonekernels check-det coins.yaml --term coin --depth 0
    """
    ctx = AppContext()
    level = ctx.depth(depth)

    try:
        program = ctx.load(program_file)
        f = denote(program, program.resolve_term(term))
        diff = determinism_witness(f, level)
    except typer.Exit:
        raise
    except Exception as e:
        handle_command_exception(
            e,
            "check_det",
            ctx.console,
            ctx.logger,
            json_output,
            lambda msg: CheckOutputJson(status="error", check="determinism", errors=[msg]),
        )
        return

    failure = None
    if diff is not None:
        failure = (
            f"level {diff.level}, entry ({diff.row}, {diff.column}) = "
            f"{format_rational(diff.left)} is neither 0 nor 1"
        )
    holds = f"deterministic up to depth {level}"
    _report(ctx, "determinism", level, diff, holds, json_output, failure)

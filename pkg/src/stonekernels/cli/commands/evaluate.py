"""Eval command implementation."""

import typer

from ...dsl.evaluator import eval_term, typecheck
from ...dsl.terms import print_term
from ..context import AppContext
from ..decorators import handle_command_exception
from ..output import EvalOutputJson, matrix_json, output_json, print_plain
from ..types import DepthOption, JsonOption, ProgramFileArg, TermOption


def eval_command(
    program_file: ProgramFileArg,
    term: TermOption,
    depth: DepthOption = None,
    json_output: JsonOption = False,
) -> None:
    """
    Evaluate a term and print its matrix at one level.

    Entries are exact "p/q" rationals, one row per line.

    [bold]Examples:[/bold]

      stonekernels eval coins.yaml --term law --depth 3

      stonekernels eval coins.yaml --term "copy[X] ; (id[X] (x) discard[X])"
    """
    ctx = AppContext()
    log = ctx.logger
    level = ctx.depth(depth)

    try:
        log.info("eval_started", program_path=str(program_file), term=term, depth=level)
        program = ctx.load(program_file)
        tree = program.resolve_term(term)
        term_type = typecheck(program, tree)
        kernel = eval_term(program, tree, level)

        if json_output:
            output_json(
                EvalOutputJson(
                    status="success",
                    term=print_term(tree),
                    depth=level,
                    dom=program.object_name(term_type.dom),
                    cod=program.object_name(term_type.cod),
                    matrix=matrix_json(kernel),
                ),
                ctx.console,
            )
        else:
            print_plain(kernel.render(), ctx.console)

    except typer.Exit:
        raise
    except Exception as e:
        handle_command_exception(
            e,
            "eval",
            ctx.console,
            log,
            json_output,
            lambda msg: EvalOutputJson(status="error", errors=[msg]),
        )

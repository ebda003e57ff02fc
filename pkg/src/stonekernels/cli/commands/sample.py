"""Sample command implementation."""

from typing import Annotated

import typer
from rich.table import Table

from ...dsl.evaluator import denote
from ...dsl.sampling import sample_report
from ...rationals import format_rational
from ...stone import Clopen
from ..context import AppContext
from ..decorators import handle_command_exception, progress_indicator
from ..output import SampleOutputJson, output_json
from ..types import DepthOption, JsonOption, ProgramFileArg, SeedOption, StateOption


def sample_command(
    program_file: ProgramFileArg,
    state: StateOption,
    depth: DepthOption = None,
    seed: SeedOption = None,
    count: Annotated[
        int | None,
        typer.Option("--count", "-n", min=0, help="Number of draws (default: 1000)"),
    ] = None,
    clopen: Annotated[
        str | None,
        typer.Option(
            "--clopen", "-c", help="Report the empirical frequency of this cylinder"
        ),
    ] = None,
    json_output: JsonOption = False,
) -> None:
    """
    Draw exact ancestral samples from a state's level distribution.

    The same seed always gives the same draws. With --clopen the empirical frequency of
    the cylinder is shown next to its exact measure.

    [bold]Examples:[/bold]

      stonekernels sample coins.yaml --state coin --depth 3 --seed 7 --count 100000

      stonekernels sample coins.yaml --state coin --depth 3 --clopen 3:5
    """
    ctx = AppContext()
    level = ctx.depth(depth)
    rng_seed = ctx.seed(seed)
    draws = ctx.settings.sample_count if count is None else count

    try:
        program = ctx.load(program_file)
        kernel = denote(program, program.resolve_term(state))
        cylinder = Clopen.from_literal(kernel.cod, clopen) if clopen is not None else None
        with progress_indicator(ctx.console, f"Drawing {draws} samples", enabled=not json_output):
            report = sample_report(kernel, level, rng_seed, draws, cylinder)
    except typer.Exit:
        raise
    except Exception as e:
        handle_command_exception(
            e,
            "sample",
            ctx.console,
            ctx.logger,
            json_output,
            lambda msg: SampleOutputJson(status="error", errors=[msg]),
        )
        return

    exact = format_rational(report.exact) if report.exact is not None else None
    if json_output:
        output_json(
            SampleOutputJson(
                status="success",
                state=state,
                depth=level,
                seed=rng_seed,
                count=report.count,
                counts={str(e): n for e, n in report.counts.items()},
                clopen=cylinder.literal() if cylinder else None,
                hits=report.hits,
                frequency=report.frequency,
                exact=exact,
            ),
            ctx.console,
        )
        return

    table = Table(show_header=True, header_style="bold", show_edge=False)
    table.add_column(f"Level-{level} element", justify="right", style="cyan")
    table.add_column("Draws", justify="right")
    for element, n in report.counts.items():
        table.add_row(str(element), str(n))
    ctx.console.print(table)
    if cylinder is not None:
        frequency = "n/a" if report.frequency is None else f"{report.frequency:.4f}"
        ctx.console.print(
            f"cylinder {cylinder.literal()}: {report.hits}/{report.count} draws, "
            f"frequency {frequency}, exact measure {exact}",
            highlight=False,
            soft_wrap=True,
        )

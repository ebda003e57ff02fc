"""Axioms command implementation."""

from typing import Annotated

import typer

from ...errors import StoneKernelsError
from ...laws import SuiteParameters, run_all_suites
from ..context import AppContext
from ..decorators import EXIT_PROPERTY_FAILED, handle_command_exception, progress_indicator
from ..output import (
    AxiomsOutputJson,
    output_json,
    print_error,
    print_law_reports,
    print_success,
    suite_json,
)
from ..types import DepthOption, JsonOption, SeedOption


def axioms_command(
    seed: SeedOption = None,
    cases: Annotated[
        int | None, typer.Option("--cases", "-k", min=1, help="Random cases per suite")
    ] = None,
    max_size: Annotated[
        int | None,
        typer.Option("--max-size", min=1, max=5, help="Largest finite object drawn"),
    ] = None,
    depth: DepthOption = None,
    max_denominator: Annotated[
        int | None,
        typer.Option("--max-denominator", min=1, help="Largest row denominator drawn"),
    ] = None,
    only: Annotated[
        str | None,
        typer.Option("--only", help="Run only suites whose name starts with this prefix"),
    ] = None,
    json_output: JsonOption = False,
) -> None:
    """
    Run the property suites of every layer and report each law.

    Suites run one after another in a fixed order, each seeded from --seed and its own
    name, so a report is reproducible. Exits with 1 if any law fails.

    [bold]Examples:[/bold]

      stonekernels axioms --seed 7 --cases 500 --max-size 5 --depth 6

      stonekernels axioms --only proker
    """
    ctx = AppContext()
    settings = ctx.settings
    params = SuiteParameters(
        seed=ctx.seed(seed),
        cases=settings.cases if cases is None else cases,
        max_size=settings.max_size if max_size is None else max_size,
        depth=ctx.depth(depth),
        max_denominator=settings.max_denominator if max_denominator is None else max_denominator,
    )

    try:
        ctx.logger.info("axioms_started", **vars(params), only=only)
        with progress_indicator(ctx.console, "Checking laws", enabled=not json_output):
            reports = run_all_suites(params, only=only)
        if not reports:
            raise StoneKernelsError(f"No suite name starts with '{only}'")
    except typer.Exit:
        raise
    except Exception as e:
        handle_command_exception(
            e,
            "axioms",
            ctx.console,
            ctx.logger,
            json_output,
            lambda msg: AxiomsOutputJson(status="error", errors=[msg]),
        )
        return

    failed = [r for r in reports if not r.passed]
    if json_output:
        output_json(
            AxiomsOutputJson(
                status="failure" if failed else "success",
                seed=params.seed,
                cases=params.cases,
                max_size=params.max_size,
                depth=params.depth,
                suites=[suite_json(r) for r in reports],
            ),
            ctx.console,
        )
    else:
        print_law_reports(reports, ctx.console)
        total = sum(r.cases for r in reports)
        if failed:
            print_error(f"{len(failed)} of {len(reports)} suites failed", ctx.console)
        else:
            print_success(f"{len(reports)} suites, {total} cases, all laws hold", ctx.console)

    if failed:
        raise typer.Exit(code=EXIT_PROPERTY_FAILED)

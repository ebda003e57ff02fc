"""Command-line interface for stonekernels using Typer + Rich."""

import sys
from typing import Annotated, cast, get_args

import click
import typer
from rich import print as rprint
from rich.console import Console
from rich.traceback import install as install_rich_traceback

from ..logging_config import LogFormat, LogLevel, configure_logging

install_rich_traceback(show_locals=False)

app = typer.Typer(
    name="stonekernels",
    help="Evaluate and check exact probability kernels between finite sets and Stone spaces",
    no_args_is_help=True,
    rich_markup_mode="rich",
    add_completion=False,
    pretty_exceptions_enable=True,
    context_settings={"help_option_names": ["-h", "--help"]},
)


def version_callback(value: bool) -> None:
    """Show version and exit."""
    if value:
        from importlib.metadata import version as get_version

        try:
            __version__ = get_version("stonekernels")
        except Exception:
            __version__ = "unknown"
        rprint(f"stonekernels version {__version__}")
        raise typer.Exit()


@app.callback()
def main_callback(
    version: Annotated[
        bool | None,
        typer.Option(
            "--version",
            "-v",
            callback=version_callback,
            is_eager=True,
            help="Show version and exit",
        ),
    ] = None,
    log_level: Annotated[
        str | None,
        typer.Option(
            "--log-level",
            click_type=click.Choice(get_args(LogLevel)),
            help="Structured log level (default: ERROR)",
        ),
    ] = None,
    log_format: Annotated[
        str | None,
        typer.Option(
            "--log-format",
            click_type=click.Choice(get_args(LogFormat)),
            help="Structured log renderer (default: console)",
        ),
    ] = None,
) -> None:
    """
    Evaluate and check exact probability kernels.

    [bold]Examples:[/bold]

      stonekernels eval coins.yaml --term law --depth 3
      stonekernels check-eq coins.yaml --left law --right "id[X]"
      stonekernels check-det coins.yaml --term coin
      stonekernels measure coins.yaml --state coin --clopen 3:5
      stonekernels sample coins.yaml --state coin --depth 3 --seed 7
      stonekernels axioms --seed 7 --cases 500
    """
    # Logs go to stderr; stdout carries results only.
    configure_logging(
        level=cast(LogLevel | None, log_level), format=cast(LogFormat | None, log_format)
    )


# Register commands (import after app callback is defined)
from .commands import (  # noqa: E402
    axioms_command,
    check_det_command,
    check_eq_command,
    conditional_command,
    eval_command,
    measure_command,
    sample_command,
)

app.command(name="eval")(eval_command)
app.command(name="check-eq")(check_eq_command)
app.command(name="check-det")(check_det_command)
app.command(name="conditional")(conditional_command)
app.command(name="measure")(measure_command)
app.command(name="axioms")(axioms_command)
app.command(name="sample")(sample_command)


def main() -> int:
    """Entry point for CLI (called from pyproject.toml).

    Returns:
        Exit code: 0 on success, 1 when a property fails, 2 on invalid input
    """
    try:
        app()
        return 0
    except typer.Exit as e:
        return e.exit_code if e.exit_code is not None else 0
    except KeyboardInterrupt:
        Console().print("\n[yellow]Cancelled by user[/yellow]")
        return 130
    except Exception as e:
        Console().print(f"[red]Error:[/red] {e}", style="bold")
        if "--debug" in sys.argv:
            raise
        return 1


if __name__ == "__main__":
    sys.exit(main())

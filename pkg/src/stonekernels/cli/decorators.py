"""Decorators and helpers for CLI commands.

Error handling is shared by every command so the exit codes mean the same thing
everywhere: 0 when the command succeeds or the property holds, 1 when a property fails
or something unexpected breaks, 2 when the input cannot be parsed or validated.
"""

from collections.abc import Callable, Iterator
from contextlib import contextmanager

import structlog
import typer
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn

from ..errors import StoneKernelsError
from .output import output_json, print_error

EXIT_OK = 0
EXIT_PROPERTY_FAILED = 1
EXIT_INVALID_INPUT = 2


def handle_command_exception(
    e: Exception,
    command_name: str,
    console: Console,
    logger: structlog.stdlib.BoundLogger,
    json_output: bool = False,
    json_error_factory: Callable[[str], object] | None = None,
) -> None:
    """Log the exception, report it, and exit with the matching code.

    Args:
        e: The exception that was raised
        command_name: Name of the command (for logging)
        console: Rich console for output
        logger: Structured logger instance
        json_output: Whether to output JSON format
        json_error_factory: Builds the JSON error object from the message

    Example:
        >>> try:
        ...     program = ctx.load(program_file)
        ... except typer.Exit:
        ...     raise
        ... except Exception as e:
        ...     handle_command_exception(
        ...         e, "eval", ctx.console, ctx.logger, json_output,
        ...         lambda msg: EvalOutputJson(status="error", errors=[msg])
        ...     )
    """
    expected = isinstance(e, StoneKernelsError | FileNotFoundError)
    log_kwargs = {
        "error_type": type(e).__name__,
        "error_message": str(e),
    }

    # Keep JSON mode stderr clean for automation users.
    if expected or json_output:
        logger.error(f"{command_name}_error", **log_kwargs)
    else:
        logger.exception(f"{command_name}_error", **log_kwargs)

    if json_output and json_error_factory:
        output_json(json_error_factory(str(e)), console)  # type: ignore[arg-type]
    else:
        print_error(str(e), console)

    raise typer.Exit(code=EXIT_INVALID_INPUT if expected else EXIT_PROPERTY_FAILED) from None


@contextmanager
def progress_indicator(
    console: Console, description: str, *, enabled: bool = True
) -> Iterator[None]:
    """Show a transient spinner while the block runs (nothing when ``enabled`` is false)."""
    if not enabled:
        yield
        return
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
        transient=True,
    ) as progress:
        progress.add_task(description, total=None)
        yield

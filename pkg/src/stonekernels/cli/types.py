"""Common type aliases for CLI commands.

Options that have a session-wide default default to ``None`` here and fall back to
:class:`~stonekernels.settings.EngineSettings` inside the command.
"""

from pathlib import Path
from typing import Annotated

import typer

ProgramFileArg = Annotated[
    Path,
    typer.Argument(
        help="Path to a YAML or JSON program file",
        exists=True,
        file_okay=True,
        dir_okay=False,
        readable=True,
    ),
]

TermOption = Annotated[
    str,
    typer.Option(
        "--term",
        "-t",
        help="Named term or kernel, or term source such as 'copy[X] ; f'",
    ),
]

StateOption = Annotated[
    str,
    typer.Option(
        "--state",
        "-s",
        help="Named state or a term whose domain is unit",
    ),
]

DepthOption = Annotated[
    int | None,
    typer.Option(
        "--depth",
        "-d",
        min=0,
        help="Level to evaluate at (default: STONEKERNELS_DEPTH)",
    ),
]

SeedOption = Annotated[
    int | None,
    typer.Option(
        "--seed",
        help="Generator seed (default: STONEKERNELS_SEED)",
    ),
]

JsonOption = Annotated[
    bool,
    typer.Option(
        "--json",
        help="Output machine-readable JSON status",
    ),
]

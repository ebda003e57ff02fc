"""Application context for CLI commands."""

from dataclasses import dataclass, field
from pathlib import Path

import structlog
from rich.console import Console

from ..dsl.loader import Program, ProgramLoader
from ..settings import EngineSettings, get_settings


@dataclass
class AppContext:
    """Shared state for one CLI command.

    Attributes:
        console: Rich console for formatted output
        logger: Structured logger instance
        settings: Session defaults for options left unset
        loader: Program loader honoring the configured size limit

    Example:
        >>> ctx = AppContext()
        >>> program = ctx.load("coins.yaml")
        >>> ctx.depth(None) == ctx.settings.depth
        True
    """

    console: Console = field(default_factory=Console)
    logger: structlog.stdlib.BoundLogger = field(init=False)
    settings: EngineSettings = field(default_factory=get_settings)
    loader: ProgramLoader = field(init=False)

    def __post_init__(self) -> None:
        self.logger = structlog.get_logger(__name__)
        self.loader = ProgramLoader(max_bytes=self.settings.max_program_bytes)

    def load(self, path: str | Path) -> Program:
        return self.loader.load_from_file(path)

    def depth(self, value: int | None) -> int:
        return self.settings.depth if value is None else value

    def seed(self, value: int | None) -> int:
        return self.settings.seed if value is None else value

"""Logging configuration for stonekernels.

Structured logging through structlog on top of the standard library, rendered either
for humans (console) or for machines (JSON lines). Exact rationals in event fields are
written as ``p/q`` strings, and fields bound with :func:`structlog.contextvars.bound_contextvars`
(the running law suite, for instance) are merged into every event.

Example:
    >>> from stonekernels.logging_config import configure_logging, get_logger
    >>> configure_logging(level="INFO", format="console")
    >>> log = get_logger(__name__)
    >>> log.info("law_suite_started", suite="finker.category", cases=500)
"""

import logging
import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from fractions import Fraction
from typing import Literal

import structlog
from structlog.typing import EventDict, WrappedLogger

from .rationals import format_rational

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR"]
LogFormat = Literal["json", "console"]


def _exact(value: object) -> object:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, list):
        return [_exact(v) for v in value]
    if isinstance(value, tuple):
        return tuple(_exact(v) for v in value)
    return value


def render_exact_values(
    _logger: WrappedLogger, _method_name: str, event_dict: EventDict
) -> EventDict:
    """Write ``Fraction`` fields (also inside tuples and lists) as ``p/q`` strings."""
    for key, value in event_dict.items():
        event_dict[key] = _exact(value)
    return event_dict


def configure_logging(
    level: LogLevel | None = None,
    format: LogFormat | None = None,
) -> None:
    """Configure structured logging for the application.

    Arguments left as ``None`` are taken from :class:`~stonekernels.settings.EngineSettings`
    (``STONEKERNELS_LOG_LEVEL`` / ``STONEKERNELS_LOG_FORMAT``).

    Args:
        level: Minimum log level to output (DEBUG, INFO, WARNING, ERROR)
        format: Output format - 'json' for machine-readable, 'console' for human-readable

    Example:
        >>> configure_logging(level="DEBUG", format="json")
        >>> log = get_logger(__name__)
        >>> log.debug("term_evaluated", term="law", depth=3)
    """
    from .settings import get_settings

    settings = get_settings()
    level = level or settings.log_level
    format = format or settings.log_format

    log_level = getattr(logging, level.upper())
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=log_level)
    logging.getLogger("stonekernels").setLevel(log_level)

    renderer: structlog.types.Processor
    if format == "json":
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            structlog.processors.format_exc_info,
            render_exact_values,
            structlog.processors.CallsiteParameterAdder(
                {
                    structlog.processors.CallsiteParameter.FILENAME,
                    structlog.processors.CallsiteParameter.FUNC_NAME,
                    structlog.processors.CallsiteParameter.LINENO,
                }
            ),
            renderer,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Get a configured logger instance.

    Args:
        name: Logger name (typically __name__ from the calling module)

    Returns:
        Configured structlog logger with bound context

    Example:
        >>> log = get_logger(__name__)
        >>> log.info("program_loaded", path="coins.yaml", kernels=4)
    """
    return structlog.get_logger(name)


@contextmanager
def log_duration(
    log: structlog.stdlib.BoundLogger, event: str, **context: object
) -> Iterator[dict[str, object]]:
    """Log ``event`` with its wall-clock duration when the block exits.

    The yielded dict is merged into the final event, so a block can attach results
    (case counts, failure counts) discovered while it runs.

    Example:
        >>> with log_duration(log, "law_suite_finished", suite="bker.duality") as extra:
        ...     extra["failures"] = 0
    """
    extra: dict[str, object] = {}
    started = time.perf_counter()
    try:
        yield extra
    finally:
        elapsed_ms = round((time.perf_counter() - started) * 1000, 1)
        log.info(event, elapsed_ms=elapsed_ms, **context, **extra)

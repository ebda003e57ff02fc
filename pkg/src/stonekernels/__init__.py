"""stonekernels - exact probability kernels between finite sets and Stone spaces."""

import logging

import structlog

# Silent as a library; the CLI installs handlers via configure_logging().
logging.getLogger("stonekernels").addHandler(logging.NullHandler())
structlog.configure(
    wrapper_class=structlog.stdlib.BoundLogger,
    logger_factory=structlog.stdlib.LoggerFactory(),
    cache_logger_on_first_use=False,
)

from . import bker, finker, proker, stone  # noqa: E402
from .dsl import Program, ProgramLoader, eval_term, load_program, parse_term  # noqa: E402
from .errors import (  # noqa: E402
    DepthExceededError,
    KernelValidationError,
    ProgramError,
    StoneKernelsError,
    SystemMismatchError,
)
from .finker import FinKernel, FinObj  # noqa: E402
from .proker import ProKernel  # noqa: E402
from .stone import Clopen, InverseSystem  # noqa: E402

try:
    from importlib.metadata import version

    __version__ = version("stonekernels")
except Exception:
    __version__ = "unknown"

__all__ = [
    # Layers
    "bker",
    "finker",
    "proker",
    "stone",
    # Core types
    "Clopen",
    "FinKernel",
    "FinObj",
    "InverseSystem",
    "ProKernel",
    # Programs
    "Program",
    "ProgramLoader",
    "eval_term",
    "load_program",
    "parse_term",
    # Errors
    "DepthExceededError",
    "KernelValidationError",
    "ProgramError",
    "StoneKernelsError",
    "SystemMismatchError",
]

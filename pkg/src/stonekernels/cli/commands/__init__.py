"""CLI command implementations."""

from .axioms import axioms_command
from .check import check_det_command, check_eq_command
from .conditional import conditional_command
from .evaluate import eval_command
from .measure import measure_command
from .sample import sample_command

__all__ = [
    "eval_command",
    "check_eq_command",
    "check_det_command",
    "conditional_command",
    "measure_command",
    "axioms_command",
    "sample_command",
]

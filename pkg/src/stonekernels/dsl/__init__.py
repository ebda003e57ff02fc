"""The term language: grammar, program files, evaluation, sampling and export."""

from .evaluator import TermType, denote, eval_term, typecheck
from .export import (
    ConditionalResult,
    conditional_of,
    level_table_document,
    save_program_document,
)
from .grammar import parse_term
from .loader import Program, ProgramLoader, load_program
from .sampling import SampleReport, sample_report, sample_state
from .terms import Copy, Discard, Ident, Name, Par, Seq, Swap, Term, print_term

__all__ = [
    "ConditionalResult",
    "Copy",
    "Discard",
    "Ident",
    "Name",
    "Par",
    "Program",
    "ProgramLoader",
    "SampleReport",
    "Seq",
    "Swap",
    "Term",
    "TermType",
    "conditional_of",
    "denote",
    "eval_term",
    "level_table_document",
    "load_program",
    "parse_term",
    "print_term",
    "sample_report",
    "sample_state",
    "save_program_document",
    "typecheck",
]

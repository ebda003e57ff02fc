"""Type checking and evaluation of terms against a loaded program.

A term denotes a :class:`~stonekernels.proker.ProKernel`; evaluating it at depth ``d``
returns the level-``d`` matrix. Sequential composition is evaluated left to right.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import TypeMismatchError
from ..finker import FinKernel
from ..logging_config import get_logger
from ..proker import (
    ProKernel,
    pro_compose,
    pro_copy,
    pro_discard,
    pro_id,
    pro_swap,
    pro_tensor,
)
from ..stone import UNIT_SYSTEM, InverseSystem, product
from .loader import Program
from .terms import Copy, Discard, Ident, Name, Par, Seq, Swap, Term, print_term

log = get_logger(__name__)


@dataclass(frozen=True)
class TermType:
    """The domain and codomain of a well-typed term."""

    dom: InverseSystem
    cod: InverseSystem


def typecheck(program: Program, term: Term) -> TermType:
    """Infer ``dom`` and ``cod`` of a term.

    Raises:
        UnknownNameError: If a kernel or object name is not declared
        TypeMismatchError: If a sequential composite joins different objects
    """
    match term:
        case Name(name=name):
            kernel = program.kernel(name, term.line, term.column)
            return TermType(kernel.dom, kernel.cod)
        case Ident(obj=obj):
            system = program.object(obj, term.line, term.column)
            return TermType(system, system)
        case Copy(obj=obj):
            system = program.object(obj, term.line, term.column)
            return TermType(system, product([system, system]))
        case Discard(obj=obj):
            system = program.object(obj, term.line, term.column)
            return TermType(system, UNIT_SYSTEM)
        case Swap(left=left, right=right):
            x = program.object(left, term.line, term.column)
            y = program.object(right, term.line, term.column)
            return TermType(product([x, y]), product([y, x]))
        case Seq(first=first, second=second):
            a = typecheck(program, first)
            b = typecheck(program, second)
            if a.cod != b.dom:
                raise TypeMismatchError(
                    f"'{print_term(first)}' has codomain {program.object_name(a.cod)} but "
                    f"'{print_term(second)}' has domain {program.object_name(b.dom)}",
                    term.line,
                    term.column,
                )
            return TermType(a.dom, b.cod)
        case Par(left=left, right=right):
            a = typecheck(program, left)
            b = typecheck(program, right)
            return TermType(product([a.dom, b.dom]), product([a.cod, b.cod]))
    raise TypeError(f"Not a term: {term!r}")


def denote(program: Program, term: Term) -> ProKernel:
    """The ProKernel a well-typed term stands for.

    Raises:
        UnknownNameError, TypeMismatchError: As :func:`typecheck`
    """
    typecheck(program, term)
    return _denote(program, term)


def _denote(program: Program, term: Term) -> ProKernel:
    match term:
        case Name(name=name):
            return program.kernel(name)
        case Ident(obj=obj):
            return pro_id(program.object(obj))
        case Copy(obj=obj):
            return pro_copy(program.object(obj))
        case Discard(obj=obj):
            return pro_discard(program.object(obj))
        case Swap(left=left, right=right):
            return pro_swap(program.object(left), program.object(right))
        case Seq(first=first, second=second):
            return pro_compose(_denote(program, first), _denote(program, second))
        case Par(left=left, right=right):
            return pro_tensor(_denote(program, left), _denote(program, right))
    raise TypeError(f"Not a term: {term!r}")


def eval_term(program: Program, term: Term | str, depth: int) -> FinKernel:
    """The level-``depth`` matrix of a term, given as a tree, a term name or source text.

    Raises:
        DepthExceededError: If a level table or explicit system ends before ``depth``

    Examples:
        >>> from stonekernels.dsl.loader import ProgramLoader
        >>> program = ProgramLoader().load_from_dict({"objects": {"X": 2}})
        >>> print(eval_term(program, "copy[X] ; (id[X] (x) discard[X])", 0).render())
        1 0
        0 1
    """
    tree = program.resolve_term(term) if isinstance(term, str) else term
    kernel = denote(program, tree).level(depth)
    log.info("term_evaluated", term=print_term(tree), depth=depth, shape=kernel.shape)
    return kernel

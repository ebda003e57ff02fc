"""Abstract syntax of kernel terms and the minimal-parenthesis printer.

Terms are immutable. Source positions are carried for error messages but ignored by
equality, so a printed and re-parsed term compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Name:
    """A declared kernel."""

    name: str
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Ident:
    """``id[OBJ]``."""

    obj: str
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Copy:
    """``copy[OBJ]``."""

    obj: str
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Discard:
    """``discard[OBJ]``."""

    obj: str
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Swap:
    """``swap[LEFT, RIGHT]``."""

    left: str
    right: str
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Seq:
    """``first ; second``: first, then second."""

    first: Term
    second: Term
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Par:
    """``left (x) right``."""

    left: Term
    right: Term
    line: int | None = field(default=None, compare=False, repr=False)
    column: int | None = field(default=None, compare=False, repr=False)


Term = Name | Ident | Copy | Discard | Swap | Seq | Par

KEYWORDS = frozenset({"id", "copy", "discard", "swap"})


def print_term(term: Term) -> str:
    """Render a term with the fewest parentheses that reparse to the same tree.

    ``;`` binds looser than ``(x)`` and both associate to the left.

    Examples:
        >>> print_term(Seq(Copy("X"), Par(Name("f"), Ident("X"))))
        'copy[X] ; f (x) id[X]'
    """
    match term:
        case Name(name=name):
            return name
        case Ident(obj=obj):
            return f"id[{obj}]"
        case Copy(obj=obj):
            return f"copy[{obj}]"
        case Discard(obj=obj):
            return f"discard[{obj}]"
        case Swap(left=left, right=right):
            return f"swap[{left}, {right}]"
        case Seq(first=first, second=second):
            right_text = print_term(second)
            if isinstance(second, Seq):
                right_text = f"({right_text})"
            return f"{print_term(first)} ; {right_text}"
        case Par(left=left, right=right):
            left_text = print_term(left)
            if isinstance(left, Seq):
                left_text = f"({left_text})"
            right_text = print_term(right)
            if isinstance(right, Seq | Par):
                right_text = f"({right_text})"
            return f"{left_text} (x) {right_text}"
    raise TypeError(f"Not a term: {term!r}")


def kernel_names(term: Term) -> set[str]:
    """Every kernel name the term refers to."""
    match term:
        case Name(name=name):
            return {name}
        case Seq(first=a, second=b) | Par(left=a, right=b):
            return kernel_names(a) | kernel_names(b)
    return set()


def object_names(term: Term) -> set[str]:
    """Every object name used by a structural atom."""
    match term:
        case Ident(obj=obj) | Copy(obj=obj) | Discard(obj=obj):
            return {obj}
        case Swap(left=left, right=right):
            return {left, right}
        case Seq(first=a, second=b) | Par(left=a, right=b):
            return object_names(a) | object_names(b)
    return set()

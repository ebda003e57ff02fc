"""Parser for kernel terms.

Grammar (``;`` binds looser than ``(x)``, both associate to the left)::

    term := term ";" term | term "(x)" term | atom
    atom := IDENT | "id[" IDENT "]" | "copy[" IDENT "]" | "discard[" IDENT "]"
          | "swap[" IDENT "," IDENT "]" | "(" term ")"

Lexical problems raise :class:`~stonekernels.errors.LexicalError` and misplaced tokens
raise :class:`~stonekernels.errors.TermSyntaxError`, both with 1-based positions.
"""

from __future__ import annotations

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from ..errors import LexicalError, TermSyntaxError
from .terms import Copy, Discard, Ident, Name, Par, Seq, Swap, Term

TERM_GRAMMAR = r"""
    ?start: seq

    ?seq: seq ";" par   -> seq
        | par

    ?par: par "(x)" atom -> par
        | atom

    ?atom: IDENT                               -> name
         | "id" "[" IDENT "]"                  -> ident
         | "copy" "[" IDENT "]"                -> copy
         | "discard" "[" IDENT "]"             -> discard
         | "swap" "[" IDENT "," IDENT "]"      -> swap
         | "(" seq ")"

    IDENT: /[A-Za-z_][A-Za-z0-9_]*/

    %import common.WS
    %ignore WS
"""

_parser = Lark(TERM_GRAMMAR, parser="lalr", propagate_positions=True)


@v_args(meta=True)
class _TermBuilder(Transformer):
    def name(self, meta, children):
        return Name(str(children[0]), meta.line, meta.column)

    def ident(self, meta, children):
        return Ident(str(children[0]), meta.line, meta.column)

    def copy(self, meta, children):
        return Copy(str(children[0]), meta.line, meta.column)

    def discard(self, meta, children):
        return Discard(str(children[0]), meta.line, meta.column)

    def swap(self, meta, children):
        return Swap(str(children[0]), str(children[1]), meta.line, meta.column)

    def seq(self, meta, children):
        return Seq(children[0], children[1], meta.line, meta.column)

    def par(self, meta, children):
        return Par(children[0], children[1], meta.line, meta.column)


def _describe_token(token: Token) -> str:
    if token.type == "$END":
        return "end of input"
    return f"'{token.value}'"


def parse_term(source: str) -> Term:
    """Parse one term.

    Raises:
        LexicalError: If the source contains a character that starts no token
        TermSyntaxError: If the tokens do not form a term

    Examples:
        >>> parse_term("copy[X] ; (f (x) id[X])") == Seq(Copy("X"), Par(Name("f"), Ident("X")))
        True
    """
    try:
        tree = _parser.parse(source)
    except UnexpectedCharacters as exc:
        raise LexicalError(
            f"unexpected character {source[exc.pos_in_stream]!r}", exc.line, exc.column
        ) from None
    except UnexpectedToken as exc:
        if exc.token.type == "$END":
            raise TermSyntaxError("unexpected end of input", *_end_position(source)) from None
        expected = ", ".join(sorted(exc.expected)) or "nothing"
        raise TermSyntaxError(
            f"unexpected {_describe_token(exc.token)} (expected one of: {expected})",
            exc.line,
            exc.column,
        ) from None
    except UnexpectedEOF:
        raise TermSyntaxError("unexpected end of input", *_end_position(source)) from None
    except UnexpectedInput as exc:
        line, column = getattr(exc, "line", None), getattr(exc, "column", None)
        raise TermSyntaxError(str(exc), line, column) from None
    return _TermBuilder().transform(tree)


def _end_position(source: str) -> tuple[int, int]:
    lines = source.split("\n")
    return len(lines), len(lines[-1]) + 1

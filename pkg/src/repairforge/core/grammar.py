"""LALR grammars for the facts file, the denial DSL and disjunctive databases.

All three share the literal syntax for values so that a constant written in a
constraint reads exactly like the same constant in a facts file.
"""

from functools import cache

from lark import Lark, Token, Transformer
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    VisitError,
)

from src.repairforge.core.model import Fact
from src.repairforge.core.values import Symbol, Value, check_integer, make_rational
from src.repairforge.errors import ParseError

_VALUES = r"""
value: NUMBER      -> number
     | LOWER_NAME  -> symbol
     | QUOTED      -> quoted

ground_atom: LOWER_NAME "(" value ("," value)* ")"
header: "#relation" LOWER_NAME "/" INT "."

NUMBER: /-?[0-9]+(\/[0-9]+)?/
INT: /[0-9]+/
LOWER_NAME: /[a-z][A-Za-z0-9_]*/
QUOTED: /'(?:[^'\\\n]|\\.)*'/
COMMENT: /%[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

FACTS_GRAMMAR = r"""
start: (header | fact)*
fact: ground_atom "."
""" + _VALUES

DISJUNCTIVE_GRAMMAR = r"""
start: disjunction*
disjunction: ground_atom ("v" ground_atom)* "."
""" + _VALUES

CONSTRAINTS_GRAMMAR = r"""
start: (header | denial | fd | key)*
denial: ":-" literal ("," literal)* "."
?literal: atom | comparison
atom: LOWER_NAME "(" term ("," term)* ")"
comparison: term COMP_OP term
?term: VARIABLE -> variable
     | value
fd: "FD" LOWER_NAME ":" positions "->" positions "."
key: "KEY" LOWER_NAME ":" positions "."
positions: INT (","? INT)*

VARIABLE: /[A-Z_][A-Za-z0-9_]*/
COMP_OP: "!=" | "<=" | ">=" | "<" | ">" | "="
""" + _VALUES


@cache
def get_parser(grammar: str) -> Lark:
    return Lark(grammar, parser="lalr", propagate_positions=True)


class ValueTransformer(Transformer):
    """Turns value and ground-atom subtrees into Values and Facts."""

    def __init__(self, error_cls: type[ParseError]):
        super().__init__()
        self._error_cls = error_cls

    def number(self, children: list[Token]) -> Value:
        token = children[0]
        text = str(token)
        try:
            if "/" in text:
                numerator, denominator = text.split("/")
                return make_rational(int(numerator), int(denominator))
            return check_integer(int(text))
        except ValueError as e:
            raise self._error_cls(str(e), token.line, token.column) from e

    def symbol(self, children: list[Token]) -> Symbol:
        return Symbol(str(children[0]))

    def quoted(self, children: list[Token]) -> Symbol:
        token = children[0]
        body = str(token)[1:-1]
        if not body:
            raise self._error_cls(
                "quoted symbol must be non-empty", token.line, token.column
            )
        return Symbol(_unescape(body))

    def ground_atom(self, children: list) -> tuple[Fact, int, int]:
        name = children[0]
        return Fact(str(name), tuple(children[1:])), name.line, name.column

    def header(self, children: list[Token]) -> tuple[str, str, int, int, int]:
        name, arity = children
        return ("header", str(name), int(arity), name.line, name.column)


def _unescape(body: str) -> str:
    out = []
    chars = iter(body)
    for ch in chars:
        out.append(next(chars, "") if ch == "\\" else ch)
    return "".join(out)


def parse_text(
    text: str,
    grammar: str,
    transformer: Transformer,
    error_cls: type[ParseError],
):
    """Parses and transforms `text`, normalizing lark failures into `error_cls`."""
    try:
        tree = get_parser(grammar).parse(text)
    except UnexpectedEOF as e:
        raise error_cls("unexpected end of input", _last_line(text), None) from e
    except UnexpectedCharacters as e:
        character = text[e.pos_in_stream]
        raise error_cls(
            f"unexpected character {character!r}", e.line, e.column
        ) from e
    except UnexpectedInput as e:
        token = getattr(e, "token", None)
        if token is None or token.type == "$END":
            raise error_cls("unexpected end of input", _last_line(text), None) from e
        raise error_cls(f"unexpected token {str(token)!r}", e.line, e.column) from e
    try:
        return transformer.transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ParseError):
            raise e.orig_exc from None
        raise


def _last_line(text: str) -> int:
    return text.count("\n") + 1


def read_source(source) -> str:
    """Accepts a string or a text stream."""
    return source if isinstance(source, str) else source.read()

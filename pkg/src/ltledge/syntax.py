"""Concrete syntax: parsing and rendering of formulas.

Grammar, loosest binding first::

    iff     := implies ('<->' iff)?
    implies := or ('->' implies)?
    or      := and ('|' and)*
    and     := until ('&' until)*
    until   := unary ('U' until)?
    unary   := ('!' | 'X' | 'G' | 'F' | 'up' | 'down' | 'edge') unary
             | 'true' | 'false' | ident | '(' iff ')'

Atoms are lowercase identifiers; ``true``, ``false``, ``up``, ``down``
and ``edge`` are reserved.  ``render`` emits the minimal parenthesization
that reparses to the same tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import (
    Always,
    And,
    AnyEdge,
    Atom,
    ConstFalse,
    ConstTrue,
    Eventually,
    FallEdge,
    Formula,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    RiseEdge,
    Until,
)

RESERVED = ("true", "false", "up", "down", "edge")


class ParseError(ValueError):
    """Raised on malformed input; ``pos`` is a character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>[a-z][a-z0-9_]*)
  | (?P<upper>[A-Z])
  | (?P<iff><->)
  | (?P<implies>->)
  | (?P<bang>!)
  | (?P<amp>&)
  | (?P<pipe>\|)
  | (?P<lparen>\()
  | (?P<rparen>\))
    """,
    re.VERBOSE,
)

_TEMPORAL = {"X": Next, "G": Always, "F": Eventually}
_EDGES = {"up": RiseEdge, "down": FallEdge, "edge": AnyEdge}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        assert kind is not None
        if kind != "ws":
            word = m.group()
            if kind == "upper" and word not in ("U", "X", "G", "F"):
                raise ParseError(f"unknown operator {word!r}", pos)
            if kind == "ident" and word in RESERVED:
                kind = word
            tokens.append(Token(kind, word, pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def parse_iff(self) -> Formula:
        left = self.parse_implies()
        if self.peek().kind == "iff":
            self.advance()
            return Iff(left, self.parse_iff())
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek().kind == "implies":
            self.advance()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        out = self.parse_and()
        while self.peek().kind == "pipe":
            self.advance()
            out = Or(out, self.parse_and())
        return out

    def parse_and(self) -> Formula:
        out = self.parse_until()
        while self.peek().kind == "amp":
            self.advance()
            out = And(out, self.parse_until())
        return out

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        if self.peek().kind == "upper" and self.peek().text == "U":
            self.advance()
            return Until(left, self.parse_until())
        return left

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "bang":
            self.advance()
            return Not(self.parse_unary())
        if tok.kind == "upper" and tok.text in _TEMPORAL:
            self.advance()
            return _TEMPORAL[tok.text](self.parse_unary())
        if tok.kind in _EDGES:
            self.advance()
            if not self._starts_formula(self.peek()):
                raise ParseError(
                    f"reserved word {tok.text!r} is an operator and needs an "
                    "operand; it cannot be used as an atom",
                    tok.pos,
                )
            return _EDGES[tok.kind](self.parse_unary())
        return self.parse_primary()

    def _starts_formula(self, tok: Token) -> bool:
        return (
            tok.kind in ("bang", "ident", "true", "false", "lparen")
            or tok.kind in _EDGES
            or (tok.kind == "upper" and tok.text in _TEMPORAL)
        )

    def parse_primary(self) -> Formula:
        tok = self.advance()
        if tok.kind == "ident":
            return Atom(tok.text)
        if tok.kind == "true":
            return ConstTrue()
        if tok.kind == "false":
            return ConstFalse()
        if tok.kind == "lparen":
            inner = self.parse_iff()
            closing = self.advance()
            if closing.kind != "rparen":
                raise ParseError("expected ')'", closing.pos)
            return inner
        if tok.kind == "end":
            raise ParseError("unexpected end of input: expected a formula", tok.pos)
        raise ParseError(f"expected a formula, found {tok.text!r}", tok.pos)


def parse(text: str) -> Formula:
    """Parse ``text`` into a formula, raising :class:`ParseError` on failure."""
    parser = _Parser(tokenize(text))
    out = parser.parse_iff()
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(f"unexpected trailing input {tail.text!r}", tail.pos)
    return out


_LEVEL_IFF = 1
_LEVEL_IMPLIES = 2
_LEVEL_OR = 3
_LEVEL_AND = 4
_LEVEL_UNTIL = 5
_LEVEL_UNARY = 6
_LEVEL_LEAF = 7


def _level(f: Formula) -> int:
    if isinstance(f, Iff):
        return _LEVEL_IFF
    if isinstance(f, Implies):
        return _LEVEL_IMPLIES
    if isinstance(f, Or):
        return _LEVEL_OR
    if isinstance(f, And):
        return _LEVEL_AND
    if isinstance(f, Until):
        return _LEVEL_UNTIL
    if isinstance(f, (Not, Next, Always, Eventually, RiseEdge, FallEdge, AnyEdge)):
        return _LEVEL_UNARY
    return _LEVEL_LEAF


def _wrap(f: Formula, minimum: int) -> str:
    text = render(f)
    if _level(f) < minimum:
        return "(" + text + ")"
    return text


def _prefix(keyword: str, child: Formula) -> str:
    text = _wrap(child, _LEVEL_UNARY)
    if keyword == "!":
        return "!" + text
    if text.startswith("("):
        return keyword + text
    return keyword + " " + text


def render(f: Formula) -> str:
    """Minimal-parenthesis concrete syntax; ``parse(render(f)) == f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, ConstTrue):
        return "true"
    if isinstance(f, ConstFalse):
        return "false"
    if isinstance(f, Not):
        return _prefix("!", f.child)
    if isinstance(f, Next):
        return _prefix("X", f.child)
    if isinstance(f, Always):
        return _prefix("G", f.child)
    if isinstance(f, Eventually):
        return _prefix("F", f.child)
    if isinstance(f, RiseEdge):
        return _prefix("up", f.child)
    if isinstance(f, FallEdge):
        return _prefix("down", f.child)
    if isinstance(f, AnyEdge):
        return _prefix("edge", f.child)
    if isinstance(f, Until):
        return _wrap(f.left, _LEVEL_UNTIL + 1) + " U " + _wrap(f.right, _LEVEL_UNTIL)
    if isinstance(f, And):
        return _wrap(f.left, _LEVEL_AND) + " & " + _wrap(f.right, _LEVEL_AND + 1)
    if isinstance(f, Or):
        return _wrap(f.left, _LEVEL_OR) + " | " + _wrap(f.right, _LEVEL_OR + 1)
    if isinstance(f, Implies):
        return (
            _wrap(f.left, _LEVEL_IMPLIES + 1) + " -> " + _wrap(f.right, _LEVEL_IMPLIES)
        )
    if isinstance(f, Iff):
        return _wrap(f.left, _LEVEL_IFF + 1) + " <-> " + _wrap(f.right, _LEVEL_IFF)
    raise TypeError(f"not a formula: {f!r}")

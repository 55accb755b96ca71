"""Recursive-descent parser for the formula grammar.

Precedence, loosest first: ``<->`` (left-assoc), ``->`` (right-assoc),
``|``, ``&``, then prefix ``!``/``not``.  Chains of ``&`` or ``|`` parse to a
single n-ary node.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import FALSE, TRUE, And, Atom, Formula, Iff, Implies, Not, Or

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<iff><->)|(?P<imp>->)|(?P<not>!)"
    r"|(?P<and>&)|(?P<or>\|)|(?P<lp>\()|(?P<rp>\))|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
)

_DESCRIBE = {
    "iff": "'<->'",
    "imp": "'->'",
    "not": "'!'",
    "and": "'&'",
    "or": "'|'",
    "lp": "'('",
    "rp": "')'",
    "atom": "atom",
    "true": "'true'",
    "false": "'false'",
    "eof": "end of input",
}
_OPERAND_START = ("atom", "true", "false", "not", "lp")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = expected
        self.reason = message
        hint = ""
        if expected:
            hint = "; expected " + " or ".join(_DESCRIBE.get(e, e) for e in expected)
        super().__init__(f"line {line}, column {column}: {message}{hint}")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "word":
            word = m.group()
            kind = {"not": "not", "true": "true", "false": "false"}.get(word, "atom")
            toks.append(_Tok(kind, word, line, col))
        elif kind != "ws":
            toks.append(_Tok(kind, m.group(), line, col))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected: tuple[str, ...]):
        tok = self.cur
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise FormulaSyntaxError(f"unexpected {found}", tok.line, tok.column, expected)

    def parse(self) -> Formula:
        if self.cur.kind == "eof":
            raise FormulaSyntaxError("empty formula", self.cur.line, self.cur.column, _OPERAND_START)
        f = self.iff()
        if self.cur.kind != "eof":
            self.fail(("iff", "imp", "or", "and", "eof"))
        return f

    def iff(self) -> Formula:
        left = self.imp()
        while self.cur.kind == "iff":
            self.advance()
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.cur.kind == "imp":
            self.advance()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        args = [self.conj()]
        while self.cur.kind == "or":
            self.advance()
            args.append(self.conj())
        return args[0] if len(args) == 1 else Or(*args)

    def conj(self) -> Formula:
        args = [self.unary()]
        while self.cur.kind == "and":
            self.advance()
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(*args)

    def unary(self) -> Formula:
        tok = self.cur
        if tok.kind == "not":
            self.advance()
            return Not(self.unary())
        if tok.kind == "atom":
            self.advance()
            return Atom(tok.text)
        if tok.kind == "true":
            self.advance()
            return TRUE
        if tok.kind == "false":
            self.advance()
            return FALSE
        if tok.kind == "lp":
            self.advance()
            f = self.iff()
            if self.cur.kind != "rp":
                self.fail(("rp", "iff", "imp", "or", "and"))
            self.advance()
            return f
        self.fail(_OPERAND_START)


def parse_formula(text: str) -> Formula:
    """Parse one formula.  Raises FormulaSyntaxError (with 1-based line and
    column) on malformed or empty input."""
    return _Parser(text).parse()

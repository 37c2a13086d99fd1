"""Concrete syntax for terms and constraints.

::

    constraint := literal ("&" literal)*
    literal    := term ("=" | "!=" | "in" | "nin") term
    term       := Var | nil | name | name "(" term ("," term)* ")"
                | "[" items "]"      list
                | "{[" items "]}"    multiset
                | "[[" items "]]"    compact list
                | "{" items "}"      set
    items      := empty | term ("," term)* ("|" term)?

Variables start with an uppercase letter, constants and functors with a
lowercase one.  ``#`` starts a comment.  Names with the prefixes ``F_``,
``M_``, ``N_`` and ``Z_`` are reserved for generated variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .constraints import Constraint, Literal, Rel
from .terms import NIL, App, Term, Theory, Var, is_reserved, split_aggregate

__all__ = ["ParseError", "parse", "parse_term", "detect_theory", "format_term", "format_literal", "format_constraint"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    column: int


_OPENERS = {"[": Theory.LIST, "{[": Theory.MSET, "[[": Theory.CLIST, "{": Theory.SET}
_CLOSERS = {Theory.LIST: "]", Theory.MSET: "]}", Theory.CLIST: "]]", Theory.SET: "}"}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>!=|\{\[|\]\}|\[\[|\]\]|[\[\]{}(),|&=])"
)


def _tokenize(text: str, theory: Theory | None) -> list[_Tok]:
    toks = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "name":
            toks.append(_Tok("name", tok, line, col))
        elif kind == "op":
            toks.extend(_split_op(tok, theory, line, col))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def _split_op(tok: str, theory: Theory | None, line: int, col: int) -> list[_Tok]:
    # double brackets belong to one theory only; elsewhere they are two tokens
    if tok in ("[[", "]]") and theory not in (None, Theory.CLIST):
        return [_Tok("op", tok[0], line, col), _Tok("op", tok[1], line, col + 1)]
    if tok in ("{[", "]}") and theory not in (None, Theory.MSET):
        return [_Tok("op", tok[0], line, col), _Tok("op", tok[1], line, col + 1)]
    return [_Tok("op", tok, line, col)]


class _Parser:
    def __init__(self, text: str, theory: Theory | None, allow_reserved: bool):
        self.toks = _tokenize(text, theory)
        self.i = 0
        self.theory = theory
        self.allow_reserved = allow_reserved

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.cur
        raise ParseError(message, tok.line, tok.column)

    def expect(self, text: str) -> _Tok:
        tok = self.cur
        if tok.text != text or tok.kind == "eof":
            shown = tok.text or "end of input"
            self.error(f"expected {text!r}, found {shown!r}")
        self.i += 1
        return tok

    def constraint(self) -> Constraint:
        lits = [self.literal()]
        while self.cur.text == "&":
            self.i += 1
            lits.append(self.literal())
        if self.cur.kind != "eof":
            self.error(f"unexpected {self.cur.text!r}")
        return Constraint(tuple(lits))

    def literal(self) -> Literal:
        lhs = self.term()
        tok = self.cur
        rels = {"=": (Rel.EQ, True), "!=": (Rel.EQ, False), "in": (Rel.IN, True), "nin": (Rel.IN, False)}
        if tok.text not in rels:
            shown = tok.text or "end of input"
            self.error(f"expected one of =, !=, in, nin; found {shown!r}")
        self.i += 1
        rhs = self.term()
        rel, positive = rels[tok.text]
        return Literal(rel, positive, lhs, rhs)

    def term(self) -> Term:
        tok = self.cur
        if tok.kind == "name":
            self.i += 1
            name = tok.text
            if name in ("in", "nin"):
                self.error(f"keyword {name!r} cannot be a term", tok)
            if name[0].isupper():
                if is_reserved(name) and not self.allow_reserved:
                    self.error(f"variable name {name!r} uses a reserved prefix", tok)
                return Var(name)
            if name[0] == "_":
                self.error(f"names cannot start with '_': {name!r}", tok)
            if self.cur.text == "(":
                self.i += 1
                args = [self.term()]
                while self.cur.text == ",":
                    self.i += 1
                    args.append(self.term())
                self.expect(")")
                return App(name, tuple(args))
            return App(name)
        if tok.text in _OPENERS:
            return self.aggregate(_OPENERS[tok.text])
        shown = tok.text or "end of input"
        self.error(f"expected a term, found {shown!r}")

    def aggregate(self, kind: Theory) -> Term:
        open_tok = self.cur
        if self.theory is None:
            self.theory = kind
        elif kind is not self.theory:
            self.error(f"{kind.value} constructor used in a {self.theory.value} constraint", open_tok)
        self.i += 1
        close = _CLOSERS[kind]
        elements: list[Term] = []
        rest: Term = NIL
        if self.cur.text != close:
            elements.append(self.term())
            while self.cur.text == ",":
                self.i += 1
                elements.append(self.term())
            if self.cur.text == "|":
                self.i += 1
                rest = self.term()
        self.expect(close)
        out = rest
        for e in reversed(elements):
            out = App(kind.cons, (e, out))
        return out


def parse(text: str, theory: Theory | None = None, allow_reserved: bool = False) -> Constraint:
    """Parse a conjunction.  With ``theory`` unset, the constructors decide it."""
    return _Parser(text, theory, allow_reserved).constraint()


def parse_term(text: str, theory: Theory | None = None, allow_reserved: bool = False) -> Term:
    p = _Parser(text, theory, allow_reserved)
    t = p.term()
    if p.cur.kind != "eof":
        p.error(f"unexpected {p.cur.text!r}")
    return t


def detect_theory(text: str) -> Theory | None:
    p = _Parser(text, None, True)
    p.constraint()
    return p.theory


_OPEN_TEXT = {Theory.LIST: "[", Theory.MSET: "{[", Theory.CLIST: "[[", Theory.SET: "{"}


def format_term(theory: Theory, t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if t.functor == theory.cons and len(t.args) == 2:
        elements, rest = split_aggregate(theory, t)
        inner = ", ".join(format_term(theory, e) for e in elements)
        if rest != NIL:
            inner += " | " + format_term(theory, rest)
        return _OPEN_TEXT[theory] + inner + _CLOSERS[theory]
    if not t.args:
        return t.functor
    return t.functor + "(" + ", ".join(format_term(theory, a) for a in t.args) + ")"


def format_literal(theory: Theory, lit: Literal) -> str:
    return f"{format_term(theory, lit.lhs)} {lit.symbol} {format_term(theory, lit.rhs)}"


def format_constraint(theory: Theory, c: Constraint) -> str:
    if c.is_false:
        return "false"
    if not c.literals:
        return "true"
    return " & ".join(format_literal(theory, l) for l in c.literals)

"""Recursive-descent parser for the ASCII formula grammar.

Precedence, tightest first: ``~``, ``&``, ``|``, ``->`` (right associative),
``<->``. Quantifiers are written ``forall x.`` / ``exists x.`` and scope as far
right as possible. ``&``, ``|`` and ``<->`` associate to the left.

An identifier in argument position is a variable when an enclosing quantifier
binds it (or it is listed in ``variables``) and a constant otherwise.
"""

from __future__ import annotations

import re

from .syntax import (
    And, ArityError, Bottom, Const, Exists, ForAll, Iff, Implies, Not, Or, Pred,
    Top, Var,
)

_KEYWORDS = {"forall", "exists", "true", "false"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<iff><->|↔)
  | (?P<imp>->|→)
  | (?P<not>~|¬)
  | (?P<and>&|∧)
  | (?P<or>\||∨)
  | (?P<forall>∀)
  | (?P<exists>∃)
  | (?P<top>⊤)
  | (?P<bot>⊥)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_DISPLAY = {
    "iff": "'<->'", "imp": "'->'", "not": "'~'", "and": "'&'", "or": "'|'",
    "lpar": "'('", "rpar": "')'", "comma": "','", "dot": "'.'",
    "ident": "identifier", "eof": "end of input", "forall": "'forall'",
    "exists": "'exists'", "top": "'true'", "bot": "'false'",
}


class ParseError(SyntaxError):
    """Malformed formula text.

    ``offset`` is the UTF-8 byte offset of the offending token and
    ``expected`` the set of token kinds that would have been accepted.
    """

    def __init__(self, text, char_pos, expected, found):
        self.text = text
        self.char_offset = char_pos
        self.byte_offset = len(text[:char_pos].encode("utf-8"))
        self.expected = frozenset(expected)
        self.found = found
        wanted = ", ".join(sorted(_DISPLAY.get(e, e) for e in self.expected))
        super().__init__(
            f"unexpected {found!r} at byte {self.byte_offset}; expected one of: {wanted}"
        )
        self.offset = self.byte_offset


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(text, pos, set(_DISPLAY) - {"eof"}, text[pos])
        kind = m.lastgroup
        if kind == "ident" and m.group() in _KEYWORDS:
            kind = {"forall": "forall", "exists": "exists", "true": "top", "false": "bot"}[m.group()]
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.scope = list(variables)
        self.sig = {}

    @property
    def kind(self):
        return self.tokens[self.i][0]

    def fail(self, expected):
        _, value, pos = self.tokens[self.i]
        raise ParseError(self.text, pos, expected, value or "<eof>")

    def take(self, kind):
        if self.kind != kind:
            self.fail({kind})
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        f = self.iff()
        if self.kind != "eof":
            self.fail({"eof", "and", "or", "imp", "iff"})
        return f

    def iff(self):
        f = self.imp()
        while self.kind == "iff":
            self.i += 1
            f = Iff(f, self.imp())
        return f

    def imp(self):
        f = self.disj()
        if self.kind == "imp":
            self.i += 1
            return Implies(f, self.imp())
        return f

    def disj(self):
        f = self.conj()
        while self.kind == "or":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.kind == "and":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self):
        kind = self.kind
        if kind == "not":
            self.i += 1
            return Not(self.unary())
        if kind in ("forall", "exists"):
            self.i += 1
            var = self.take("ident")[1]
            self.take("dot")
            self.scope.append(var)
            try:
                body = self.iff()
            finally:
                self.scope.pop()
            return ForAll(var, body) if kind == "forall" else Exists(var, body)
        if kind == "lpar":
            self.i += 1
            f = self.iff()
            self.take("rpar")
            return f
        if kind == "top":
            self.i += 1
            return Top()
        if kind == "bot":
            self.i += 1
            return Bottom()
        if kind == "ident":
            return self.predicate()
        self.fail({"not", "forall", "exists", "lpar", "top", "bot", "ident"})

    def predicate(self):
        name = self.take("ident")[1]
        self.take("lpar")
        args = []
        if self.kind != "rpar":
            args.append(self.term())
            while self.kind == "comma":
                self.i += 1
                args.append(self.term())
        if self.kind != "rpar":
            self.fail({"comma", "rpar"})
        self.i += 1
        known = self.sig.setdefault(name, len(args))
        if known != len(args):
            raise ArityError(name, known, len(args))
        return Pred(name, tuple(args))

    def term(self):
        name = self.take("ident")[1]
        return Var(name) if name in self.scope else Const(name)


def parse_formula(text, variables=()):
    """Parse ASCII (or Unicode) formula text into a Formula.

    >>> parse_formula("forall x. (Human(x) -> Mammal(x))")
    ForAll(var='x', body=Implies(left=Pred(name='Human', args=(Var(name='x'),)), right=Pred(name='Mammal', args=(Var(name='x'),))))
    """
    return _Parser(text, variables).parse()

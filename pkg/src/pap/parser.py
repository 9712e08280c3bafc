"""Readers for program (.dl), hypothesis (.hyp) and observation (.obs) text.

Program grammar::

    rule    := atom ( ":-" body )? "."
    strong  := ":-" body "."
    weak    := ":~" body "." ( "[" INT ":]" )?
    body    := element ( "," element )*
    element := "not" atom | atom | expr OP expr
    expr    := term ( "+" term )?          OP in  =  !=  <  >

Hypothesis files hold ``atom [w].`` or ``atom.`` entries (weight defaults
to 1); observation files hold ``atom.`` or ``not atom.`` entries.  ``%``
starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError, PapError
from .syntax import (
    Atom,
    Builtin,
    Literal,
    Program,
    Rule,
    Sum,
    Var,
    WeakConstraint,
    check_arities,
)

_PUNCT = {
    ":-": "':-'",
    ":~": "':~'",
    "!=": "'!='",
    "(": "'('",
    ")": "')'",
    ",": "','",
    ".": "'.'",
    "[": "'['",
    "]": "']'",
    ":": "':'",
    "<": "'<'",
    ">": "'>'",
    "=": "'='",
    "+": "'+'",
    "-": "'-'",
}
_OPS = ("=", "!=", "<", ">")
_DIGITS = frozenset(string.digits)
_WORD_START = frozenset(string.ascii_letters + "_")
_WORD = _WORD_START | _DIGITS


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # IDENT VAR INT NOT EOF or the punctuation itself
    text: str
    line: int
    column: int


def _describe(kind: str) -> str:
    return _PUNCT.get(kind, kind.lower() if kind != "EOF" else "end of input")


def tokenize(text: str) -> Iterator[Token]:
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        two = text[i : i + 2]
        if two in (":-", ":~", "!="):
            yield Token(two, two, line, start_col)
            i += 2
            col += 2
            continue
        if ch in "(),.[]:<>=+-":
            yield Token(ch, ch, line, start_col)
            i += 1
            col += 1
            continue
        if ch in _DIGITS:
            j = i
            while j < n and text[j] in _DIGITS:
                j += 1
            yield Token("INT", text[i:j], line, start_col)
            col += j - i
            i = j
            continue
        if ch in _WORD_START:
            j = i + 1
            while j < n and text[j] in _WORD:
                j += 1
            word = text[i:j]
            if word == "not":
                if j < n and text[j] in " \t\r\n":
                    kind = "NOT"
                else:
                    raise ParseError("'not' must be followed by whitespace", line, start_col)
            elif word == "_" or word[0].isupper() or (word[0] == "_" and not word[1].islower()):
                kind = "VAR"
            else:
                kind = "IDENT"
            yield Token(kind, word, line, start_col)
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    yield Token("EOF", "", line, col)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.pos = 0
        self._anon = itertools.count(1)

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def fail(self, expected, tok: Token | None = None):
        tok = tok or self.tok
        found = repr(tok.text) if tok.kind != "EOF" else "end of input"
        raise ParseError(f"unexpected {found}", tok.line, tok.column, [_describe(e) for e in expected])

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail([kind])
        return self.advance()

    def at_end(self) -> bool:
        return self.tok.kind == "EOF"

    # -- terms and atoms

    def term(self):
        t = self.tok
        if t.kind == "IDENT":
            self.advance()
            return t.text
        if t.kind == "INT":
            self.advance()
            return int(t.text)
        if t.kind == "VAR":
            self.advance()
            if t.text == "_":
                return Var(f"_{next(self._anon)}")
            return Var(t.text)
        self.fail(["IDENT", "VAR", "INT"])

    def atom(self) -> Atom:
        name = self.expect("IDENT").text
        args: list = []
        if self.tok.kind == "(":
            self.advance()
            args.append(self.term())
            while self.tok.kind == ",":
                self.advance()
                args.append(self.term())
            self.expect(")")
        return Atom(name, tuple(args))

    def expr(self):
        left = self.term()
        if self.tok.kind == "+":
            self.advance()
            return Sum(left, self.term())
        return left

    def element(self):
        t = self.tok
        if t.kind == "NOT":
            self.advance()
            return Literal(self.atom(), False)
        if t.kind == "IDENT" and self.peek().kind not in _OPS + ("+",):
            return Literal(self.atom(), True)
        if t.kind in ("IDENT", "VAR", "INT"):
            left = self.expr()
            if self.tok.kind not in _OPS:
                self.fail(_OPS)
            op = self.advance().kind
            return Builtin(op, left, self.expr())
        self.fail(["NOT", "IDENT", "VAR", "INT"])

    def body(self) -> tuple:
        items = [self.element()]
        while self.tok.kind == ",":
            self.advance()
            items.append(self.element())
        return tuple(items)

    def weight(self, closing: str) -> int:
        """Parse ``INT`` (or a rejected ``-INT``) followed by ``closing``."""
        negative = False
        if self.tok.kind == "-":
            neg_tok = self.advance()
            negative = True
        value = int(self.expect("INT").text)
        if negative:
            raise PapError(
                "NEGATIVE_WEIGHT",
                f"line {neg_tok.line}, column {neg_tok.column}: weight -{value}",
            )
        for kind in closing:
            self.expect(kind)
        return value

    # -- statements

    def program(self) -> Program:
        rules: list[Rule] = []
        weak: list[WeakConstraint] = []
        while not self.at_end():
            t = self.tok
            if t.kind == ":-":
                self.advance()
                body = self.body()
                self.expect(".")
                rules.append(Rule(None, body))
            elif t.kind == ":~":
                self.advance()
                body = self.body()
                self.expect(".")
                w = 1
                if self.tok.kind == "[":
                    self.advance()
                    w = self.weight(":]")
                weak.append(WeakConstraint(body, w))
            elif t.kind == "IDENT":
                head = self.atom()
                if self.tok.kind == ":-":
                    self.advance()
                    rules.append(Rule(head, self.body()))
                else:
                    rules.append(Rule(head))
                self.expect(".")
            else:
                self.fail([":-", ":~", "IDENT"])
        return Program(tuple(rules), tuple(weak))


def parse_program(text: str) -> Program:
    prog = _Parser(text).program()
    check_arities(prog.atoms())
    return prog


def parse_rule(text: str) -> Rule:
    prog = parse_program(text)
    if len(prog.rules) != 1 or prog.weak_constraints:
        raise PapError("PARSE_ERROR", f"expected exactly one rule in {text!r}")
    return prog.rules[0]


def parse_atom(text: str) -> Atom:
    p = _Parser(text)
    a = p.atom()
    if p.tok.kind == ".":
        p.advance()
    if not p.at_end():
        p.fail(["EOF"])
    return a


@dataclass(frozen=True, slots=True)
class HypothesisDecl:
    atom: Atom
    penalty: int = 1

    def __str__(self) -> str:
        return f"{self.atom} [{self.penalty}]."


@dataclass(frozen=True, slots=True)
class ObservationDecl:
    literal: Literal

    def __str__(self) -> str:
        return f"{self.literal}."


def parse_hypotheses(text: str) -> list[HypothesisDecl]:
    p = _Parser(text)
    out: list[HypothesisDecl] = []
    seen: set[Atom] = set()
    while not p.at_end():
        t = p.tok
        a = p.atom()
        if not a.is_ground():
            raise PapError("NONGROUND_HYPOTHESIS", f"line {t.line}, column {t.column}: {a}")
        w = 1
        if p.tok.kind == "[":
            p.advance()
            w = p.weight("]")
        p.expect(".")
        if a in seen:
            raise PapError("DUPLICATE_HYPOTHESIS", f"line {t.line}, column {t.column}: {a}")
        seen.add(a)
        out.append(HypothesisDecl(a, w))
    check_arities(d.atom for d in out)
    return out


def parse_observations(text: str) -> list[ObservationDecl]:
    p = _Parser(text)
    out: list[ObservationDecl] = []
    seen: set[Literal] = set()
    while not p.at_end():
        t = p.tok
        positive = True
        if t.kind == "NOT":
            p.advance()
            positive = False
        a = p.atom()
        p.expect(".")
        if not a.is_ground():
            raise PapError("NONGROUND_OBSERVATION", f"line {t.line}, column {t.column}: {a}")
        lit = Literal(a, positive)
        if lit not in seen:
            seen.add(lit)
            out.append(ObservationDecl(lit))
    check_arities(d.literal.atom for d in out)
    return out


def parse_atom_set(text: str) -> list[Atom]:
    """Read a list of ground ``atom.`` entries (candidate solution files)."""
    p = _Parser(text)
    out: list[Atom] = []
    while not p.at_end():
        t = p.tok
        a = p.atom()
        p.expect(".")
        if not a.is_ground():
            raise PapError("NONGROUND", f"line {t.line}, column {t.column}: {a}")
        if a not in out:
            out.append(a)
    return out

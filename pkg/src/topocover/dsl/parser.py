"""Tokenizer and recursive-descent parser.

Grammar::

    program := fndef+
    fndef   := "fn" ident "(" ident ("," ident)* ")" "{" clause+ "}"
    clause  := pattern ("," pattern)* "->" expr ";"
    pattern := natlit | ident | ident "+" natlit | natlit "+" ident
    expr    := choice
    choice  := ifexpr ("|" ifexpr)*
    ifexpr  := "if" cmp "then" expr "else" expr | arith
    cmp     := arith ("==" | "<" | "<=") arith
    arith   := term (("+" | "-") term)*
    term    := factor (("*" | "div" | "mod") factor)*
    factor  := natlit | ident | ident "(" expr ("," expr)* ")" | "(" expr ")"

``#`` starts a comment running to the end of the line.
"""
from __future__ import annotations

import re
from typing import NamedTuple

from ..elements import NAT_MAX
from ..errors import ParseError
from .ast import (
    Arith, Call, Choice, Clause, FunctionDef, If, Lit, NatLit, Program, Var, VarPlus, VarRef,
)

KEYWORDS = {"fn", "if", "then", "else", "div", "mod"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>->|==|<=|[(){},;+\-*|<])
""", re.VERBOSE)


class Token(NamedTuple):
    kind: str  # num, ident, keyword, punct, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            for i, ch in enumerate(value):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        else:
            if kind == "ident" and value in KEYWORDS:
                kind = "keyword"
            tokens.append(Token(kind, value, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # -- helpers ------------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(tok.line, tok.col, f"{message}, found {found}")

    def at(self, *texts) -> bool:
        t = self.tok
        return t.kind in ("punct", "keyword") and t.text in texts

    def expect(self, text) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.error("expected an identifier")
        return self.advance()

    def number(self) -> int:
        t = self.tok
        if t.kind != "num":
            self.error("expected a natural-number literal")
        value = int(t.text)
        if value > NAT_MAX:
            raise ParseError(t.line, t.col, f"literal {t.text} exceeds {NAT_MAX}")
        self.advance()
        return value

    # -- grammar ------------------------------------------------------------
    def program(self) -> Program:
        functions = [self.fndef()]
        while self.tok.kind != "eof":
            functions.append(self.fndef())
        return Program(tuple(functions))

    def fndef(self) -> FunctionDef:
        start = self.expect("fn")
        name = self.ident().text
        self.expect("(")
        params = [self.ident().text]
        while self.at(","):
            self.advance()
            params.append(self.ident().text)
        self.expect(")")
        self.expect("{")
        clauses = [self.clause()]
        while not self.at("}"):
            clauses.append(self.clause())
        self.expect("}")
        return FunctionDef(name, tuple(params), tuple(clauses), (start.line, start.col))

    def clause(self) -> Clause:
        start = self.tok
        patterns = [self.pattern()]
        while self.at(","):
            self.advance()
            patterns.append(self.pattern())
        self.expect("->")
        body = self.expr()
        self.expect(";")
        return Clause(tuple(patterns), body, (start.line, start.col))

    def pattern(self):
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "num":
            k = self.number()
            if self.at("+"):
                self.advance()
                return VarPlus(self.ident().text, k, pos)
            return Lit(k, pos)
        if t.kind == "ident":
            name = self.advance().text
            if self.at("+"):
                self.advance()
                return VarPlus(name, self.number(), pos)
            return Var(name, pos)
        self.error("expected a pattern")

    def expr(self):
        left = self.ifexpr()
        while self.at("|"):
            bar = self.advance()
            left = Choice(left, self.ifexpr(), (bar.line, bar.col))
        return left

    def ifexpr(self):
        if self.at("if"):
            start = self.advance()
            lhs = self.arith()
            if not self.at("==", "<", "<="):
                self.error("expected a comparison '==', '<' or '<='")
            op = self.advance().text
            rhs = self.arith()
            self.expect("then")
            then = self.expr()
            self.expect("else")
            else_ = self.expr()
            return If(op, lhs, rhs, then, else_, (start.line, start.col))
        return self.arith()

    def arith(self):
        left = self.term()
        while self.at("+", "-"):
            op = self.advance()
            left = Arith(op.text, left, self.term(), (op.line, op.col))
        return left

    def term(self):
        left = self.factor()
        while self.at("*", "div", "mod"):
            op = self.advance()
            left = Arith(op.text, left, self.factor(), (op.line, op.col))
        return left

    def factor(self):
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "num":
            return NatLit(self.number(), pos)
        if t.kind == "ident":
            name = self.advance().text
            if not self.at("("):
                return VarRef(name, pos)
            self.advance()
            args = [self.expr()]
            while self.at(","):
                self.advance()
                args.append(self.expr())
            self.expect(")")
            return Call(name, tuple(args), pos)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        self.error("expected an expression")


def parse(text: str) -> Program:
    """Parse source text; raises :class:`ParseError` with a 1-based line and column."""
    return Parser(text).program()

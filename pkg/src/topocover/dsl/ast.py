"""Syntax tree of the recursive-function language, and its pretty printer.

Source positions are carried in ``pos`` fields that take no part in
equality, so a program and the re-parse of its printed form compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

Pos = Optional[tuple]  # (line, column), 1-based


def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Lit:
    value: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class VarPlus:
    """Matches naturals ``>= k``, binding ``name`` to ``n - k``."""

    name: str
    k: int
    pos: Pos = _pos()


Pattern = Union[Lit, Var, VarPlus]


@dataclass(frozen=True)
class NatLit:
    value: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class VarRef:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Arith:
    op: str  # one of + - * div mod
    lhs: "Expr"
    rhs: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class If:
    cmp: str  # one of == < <=
    lhs: "Expr"
    rhs: "Expr"
    then: "Expr"
    else_: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    pos: Pos = _pos()


@dataclass(frozen=True)
class Choice:
    lhs: "Expr"
    rhs: "Expr"
    pos: Pos = _pos()


Expr = Union[NatLit, VarRef, Arith, If, Call, Choice]


@dataclass(frozen=True)
class Clause:
    patterns: tuple
    body: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class FunctionDef:
    name: str
    params: tuple
    clauses: tuple
    pos: Pos = _pos()

    @property
    def arity(self):
        return len(self.params)


@dataclass(frozen=True)
class Program:
    functions: tuple

    def function(self, name) -> Optional[FunctionDef]:
        return next((f for f in self.functions if f.name == name), None)


ADDITIVE = ("+", "-")
MULTIPLICATIVE = ("*", "div", "mod")
COMPARISONS = ("==", "<", "<=")

# binding strength used by the printer
_CHOICE, _IF, _ADD, _MUL, _ATOM = range(5)


def _level(e) -> int:
    if isinstance(e, Choice):
        return _CHOICE
    if isinstance(e, If):
        return _IF
    if isinstance(e, Arith):
        return _ADD if e.op in ADDITIVE else _MUL
    return _ATOM


def _open_tail(e) -> bool:
    # an unparenthesised trailing if would swallow whatever follows as its else branch
    if isinstance(e, If):
        return True
    if isinstance(e, Choice):
        return _level(e.rhs) >= _IF and _open_tail(e.rhs)
    return False


def _wrap(e, ok: bool) -> str:
    s = format_expr(e)
    return s if ok else f"({s})"


def format_expr(e: Expr) -> str:
    if isinstance(e, NatLit):
        return str(e.value)
    if isinstance(e, VarRef):
        return e.name
    if isinstance(e, Call):
        return f"{e.name}(" + ", ".join(format_expr(a) for a in e.args) + ")"
    if isinstance(e, Choice):
        left = _wrap(e.lhs, not _open_tail(e.lhs))
        right = _wrap(e.rhs, _level(e.rhs) >= _IF)
        return f"{left} | {right}"
    if isinstance(e, If):
        return (f"if {_wrap(e.lhs, _level(e.lhs) >= _ADD)} {e.cmp} "
                f"{_wrap(e.rhs, _level(e.rhs) >= _ADD)} then {format_expr(e.then)} "
                f"else {format_expr(e.else_)}")
    lvl = _level(e)
    left = _wrap(e.lhs, _level(e.lhs) >= lvl)
    right = _wrap(e.rhs, _level(e.rhs) > lvl)
    return f"{left} {e.op} {right}"


def format_pattern(p: Pattern) -> str:
    if isinstance(p, Lit):
        return str(p.value)
    if isinstance(p, Var):
        return p.name
    return f"{p.name}+{p.k}"


def format_program(p: Program) -> str:
    out = []
    for fd in p.functions:
        out.append(f"fn {fd.name}({', '.join(fd.params)}) {{")
        for c in fd.clauses:
            pats = ", ".join(format_pattern(x) for x in c.patterns)
            out.append(f"  {pats} -> {format_expr(c.body)};")
        out.append("}")
    return "\n".join(out) + "\n"

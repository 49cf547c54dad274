"""Static checks that keep programs inside simple general recursion.

Errors make a program unfit for lowering; warnings (non-exhaustive or
shadowed clauses) do not.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .ast import Arith, Call, Choice, FunctionDef, If, Lit, NatLit, Program, Var, VarPlus, VarRef

ERROR = "error"
WARNING = "warning"

# kinds that are warnings; everything else is an error
WARNING_KINDS = {"NonExhaustiveWarning", "OverlapWarning"}

_GRID_LIMIT = 200_000


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None
    function: Optional[str] = None

    @property
    def severity(self) -> str:
        return WARNING if self.kind in WARNING_KINDS else ERROR

    def __str__(self):
        where = f"{self.line}:{self.column}: " if self.line is not None else ""
        return f"{where}{self.kind}: {self.message}"


def errors(violations) -> list:
    return [v for v in violations if v.severity == ERROR]


def _at(kind, message, node, fname):
    line, col = node.pos if node is not None and node.pos else (None, None)
    return Violation(kind, message, line, col, fname)


def _calls(expr):
    """All Call nodes in an expression, outermost first."""
    stack = [expr]
    while stack:
        e = stack.pop()
        if isinstance(e, Call):
            yield e
            stack.extend(reversed(e.args))
        elif isinstance(e, Arith) or isinstance(e, Choice):
            stack.extend((e.rhs, e.lhs))
        elif isinstance(e, If):
            stack.extend((e.else_, e.then, e.rhs, e.lhs))


def _has_choice(expr) -> bool:
    stack = [expr]
    while stack:
        e = stack.pop()
        if isinstance(e, Choice):
            return True
        if isinstance(e, Call):
            stack.extend(e.args)
        elif isinstance(e, Arith):
            stack.extend((e.lhs, e.rhs))
        elif isinstance(e, If):
            stack.extend((e.lhs, e.rhs, e.then, e.else_))
    return False


def function_has_choice(fd: FunctionDef) -> bool:
    return any(_has_choice(c.body) for c in fd.clauses)


class _BodyChecker:
    def __init__(self, program: Program, fd: FunctionDef, out: list):
        self.program = program
        self.fd = fd
        self.out = out
        self.bound = set()

    def report(self, kind, message, node):
        self.out.append(_at(kind, message, node, self.fd.name))

    def check(self, e, result_pos: bool, in_rec_args: bool, in_cond: bool):
        if isinstance(e, NatLit):
            return
        if isinstance(e, VarRef):
            if e.name not in self.bound:
                self.report("UnboundVariable", f"variable {e.name!r} is not bound by the patterns", e)
            return
        if isinstance(e, Choice):
            if not result_pos:
                self.report("ChoiceInOperand",
                            "choice '|' may only appear where a whole result is expected", e)
            self.check(e.lhs, result_pos, in_rec_args, in_cond)
            self.check(e.rhs, result_pos, in_rec_args, in_cond)
            return
        if isinstance(e, Arith):
            self.check(e.lhs, False, in_rec_args, in_cond)
            self.check(e.rhs, False, in_rec_args, in_cond)
            return
        if isinstance(e, If):
            self.check(e.lhs, False, in_rec_args, True)
            self.check(e.rhs, False, in_rec_args, True)
            self.check(e.then, result_pos, in_rec_args, in_cond)
            self.check(e.else_, result_pos, in_rec_args, in_cond)
            return
        # Call
        recursive = e.name == self.fd.name
        target = self.program.function(e.name)
        if target is None:
            self.report("UnknownFunction", f"call to undefined function {e.name!r}", e)
        elif len(e.args) != target.arity:
            self.report("CallArity",
                        f"{e.name} takes {target.arity} argument(s), called with {len(e.args)}", e)
        if recursive and in_rec_args:
            self.report("NestedRecursiveCall",
                        f"recursive call to {e.name} inside the arguments of another recursive call", e)
        if recursive and in_cond:
            self.report("RecursiveCallInCondition",
                        f"recursive call to {e.name} inside an if condition", e)
        for arg in e.args:
            self.check(arg, False, in_rec_args or recursive, in_cond)


def _matches(patterns, values) -> bool:
    for p, v in zip(patterns, values):
        if isinstance(p, Lit) and v != p.value:
            return False
        if isinstance(p, VarPlus) and v < p.k:
            return False
    return True


def _coverage(fd: FunctionDef, out: list):
    clauses = [c for c in fd.clauses if len(c.patterns) == fd.arity]
    if len(clauses) != len(fd.clauses):
        return
    # past the largest literal of a column every value behaves alike
    bounds = []
    for j in range(fd.arity):
        top = 0
        for c in clauses:
            p = c.patterns[j]
            if isinstance(p, Lit):
                top = max(top, p.value)
            elif isinstance(p, VarPlus):
                top = max(top, p.k)
        bounds.append(top + 1)
    size = 1
    for b in bounds:
        size *= b + 1
    if size > _GRID_LIMIT:
        return
    grid = list(itertools.product(*(range(b + 1) for b in bounds)))
    unmatched = [v for v in grid if not any(_matches(c.patterns, v) for c in clauses)]
    if unmatched:
        sample = unmatched[0]
        shown = sample[0] if len(sample) == 1 else sample
        out.append(_at("NonExhaustiveWarning",
                       f"no clause of {fd.name} matches input {shown}", fd, fd.name))
    for idx, c in enumerate(clauses):
        earlier = clauses[:idx]
        mine = [v for v in grid if _matches(c.patterns, v)]
        if earlier and all(any(_matches(e.patterns, v) for e in earlier) for v in mine):
            out.append(_at("OverlapWarning",
                           f"clause {idx + 1} of {fd.name} is shadowed by earlier clauses", c, fd.name))


def _call_graph(program: Program) -> dict:
    graph = {}
    for fd in program.functions:
        graph.setdefault(fd.name, set())
        for c in fd.clauses:
            graph[fd.name].update(call.name for call in _calls(c.body))
    return graph


def _reaches(graph, src, dst) -> bool:
    seen = set()
    stack = list(graph.get(src, ()))
    while stack:
        x = stack.pop()
        if x == dst:
            return True
        if x in seen:
            continue
        seen.add(x)
        stack.extend(graph.get(x, ()))
    return False


def validate(program: Program) -> list:
    """Return all violations, errors and warnings, in source order per function."""
    out = []
    seen_names = set()
    for fd in program.functions:
        if fd.name in seen_names:
            out.append(_at("DuplicateFunction", f"function {fd.name!r} is defined twice", fd, fd.name))
        seen_names.add(fd.name)
        for c in fd.clauses:
            if len(c.patterns) != fd.arity:
                out.append(_at("PatternArity",
                               f"clause has {len(c.patterns)} pattern(s), {fd.name} has arity {fd.arity}",
                               c, fd.name))
            checker = _BodyChecker(program, fd, out)
            for p in c.patterns:
                if isinstance(p, (Var, VarPlus)):
                    if p.name in checker.bound:
                        out.append(_at("DuplicatePatternVariable",
                                       f"variable {p.name!r} is bound twice in one clause", p, fd.name))
                    checker.bound.add(p.name)
            checker.check(c.body, True, False, False)
        _coverage(fd, out)

    graph = _call_graph(program)
    for fd in program.functions:
        for c in fd.clauses:
            for call in _calls(c.body):
                g = call.name
                if g == fd.name or g not in graph:
                    continue
                if _reaches(graph, g, fd.name):
                    out.append(_at("MutualRecursion",
                                   f"{fd.name} and {g} call each other", call, fd.name))
                elif _reaches(graph, g, g):
                    out.append(_at("RecursiveHelperCall",
                                   f"helper {g} is itself recursive", call, fd.name))
                else:
                    helper = program.function(g)
                    if helper is not None and function_has_choice(helper):
                        out.append(_at("ChoiceInHelper",
                                       f"helper {g} is nondeterministic", call, fd.name))
    return out

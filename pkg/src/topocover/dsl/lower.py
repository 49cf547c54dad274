"""Lowering a validated program into an axiom set and a one-step functional.

Inputs of a function of arity k are tuples of k naturals.  For an input,
the first matching clause is selected; choices and if-expressions standing
in result position are resolved into a list of alternatives, one axiom
index per alternative.  The children at index ``i`` are the arguments of
the recursive calls that alternative ``i`` would make, and the functional
replays alternative ``i`` with the recursive calls answered by its callback.
"""
from __future__ import annotations

from ..axioms import IndexedAxiomSet, SingletonAxiomSet
from ..elements import Nat, Tuple, checked_add, checked_mul, encode
from ..errors import EvalError, NoMatchingClause, ProgramError
from ..recursion import Functional, NondetFunctional
from .ast import Arith, Call, Choice, If, Lit, NatLit, Program, Var, VarRef
from .validate import errors, function_has_choice, validate


def _arith(op, x, y):
    if op == "+":
        return checked_add(x, y)
    if op == "-":
        return max(x - y, 0)
    if op == "*":
        return checked_mul(x, y)
    if y == 0:
        raise EvalError(f"{op} by zero")
    return x // y if op == "div" else x % y


def _compare(op, x, y):
    if op == "==":
        return x == y
    if op == "<":
        return x < y
    return x <= y


def _as_int(v, where):
    if not isinstance(v, Nat):
        raise EvalError(f"{where} returned {encode(v)}, which is not a natural number")
    return v.value


def match(fd, values):
    """First clause of ``fd`` matching the natural-number arguments, with its bindings."""
    for c in fd.clauses:
        env = {}
        for p, v in zip(c.patterns, values):
            if isinstance(p, Lit):
                if v != p.value:
                    break
            elif isinstance(p, Var):
                env[p.name] = v
            else:
                if v < p.k:
                    break
                env[p.name] = v - p.k
        else:
            return c, env
    return None


class _Interpreter:
    def __init__(self, program: Program, fname: str):
        self.program = program
        self.fname = fname
        self.fd = program.function(fname)

    def eval(self, e, env, rec):
        """Evaluate ``e`` to an int; ``rec`` answers calls to the target function."""
        if isinstance(e, NatLit):
            return e.value
        if isinstance(e, VarRef):
            return env[e.name]
        if isinstance(e, Arith):
            return _arith(e.op, self.eval(e.lhs, env, rec), self.eval(e.rhs, env, rec))
        if isinstance(e, If):
            taken = _compare(e.cmp, self.eval(e.lhs, env, rec), self.eval(e.rhs, env, rec))
            return self.eval(e.then if taken else e.else_, env, rec)
        if isinstance(e, Call):
            args = tuple(self.eval(a, env, rec) for a in e.args)
            if e.name == self.fname:
                return _as_int(rec(Tuple(tuple(Nat(v) for v in args))), e.name)
            return self.apply_helper(e.name, args)
        raise EvalError("choice reached outside a result position")

    def apply_helper(self, name, args):
        fd = self.program.function(name)
        m = match(fd, args)
        if m is None:
            raise EvalError(f"no clause of {name} matches {args}")
        clause, env = m
        return self.eval(clause.body, env, None)

    def alternatives(self, e, env):
        if isinstance(e, Choice):
            return self.alternatives(e.lhs, env) + self.alternatives(e.rhs, env)
        if isinstance(e, If):
            taken = _compare(e.cmp, self.eval(e.lhs, env, None), self.eval(e.rhs, env, None))
            return self.alternatives(e.then if taken else e.else_, env)
        return [e]

    def calls(self, e, env, out):
        """Collect the arguments of the recursive calls ``e`` makes, resolving ifs."""
        if isinstance(e, Arith):
            self.calls(e.lhs, env, out)
            self.calls(e.rhs, env, out)
        elif isinstance(e, If):
            taken = _compare(e.cmp, self.eval(e.lhs, env, None), self.eval(e.rhs, env, None))
            self.calls(e.then if taken else e.else_, env, out)
        elif isinstance(e, Call):
            if e.name == self.fname:
                args = tuple(self.eval(a, env, None) for a in e.args)
                out.append(Tuple(tuple(Nat(v) for v in args)))
            else:
                for a in e.args:
                    self.calls(a, env, out)
        return out


def _values(a, arity):
    if not isinstance(a, Tuple) or len(a.items) != arity:
        return None
    if not all(isinstance(x, Nat) for x in a.items):
        return None
    return tuple(x.value for x in a.items)


def lower(program: Program, fname: str):
    """Return ``(IndexedAxiomSet, NondetFunctional)`` for function ``fname``.

    Raises :class:`ProgramError` if the program has validation errors.
    Unmatched inputs raise :class:`NoMatchingClause` when first queried.
    """
    violations = errors(validate(program))
    if violations:
        raise ProgramError(violations)
    fd = program.function(fname)
    if fd is None:
        raise ProgramError([f"no function named {fname!r}"])
    interp = _Interpreter(program, fname)
    cache = {}

    def resolve(a):
        hit = cache.get(a)
        if hit is not None:
            return hit
        values = _values(a, fd.arity)
        m = match(fd, values) if values is not None else None
        if m is None:
            raise NoMatchingClause(a)
        clause, env = m
        alts = interp.alternatives(clause.body, env)
        kids = [interp.calls(alt, env, []) for alt in alts]
        cache[a] = (env, alts, kids)
        return cache[a]

    def indexes(a):
        return range(len(resolve(a)[1]))

    def children(a, i):
        return resolve(a)[2][i]

    def step(a, i, recurse):
        env, alts, _ = resolve(a)
        return Nat(interp.eval(alts[i], env, recurse))

    axioms = IndexedAxiomSet(indexes, children, "FromProgram", fname)
    return axioms, NondetFunctional(step, fname)


def lower_singleton(program: Program, fname: str):
    """Lower a choice-free function to ``(SingletonAxiomSet, Functional)``."""
    fd = program.function(fname)
    if fd is not None and function_has_choice(fd):
        raise ProgramError([f"{fname} uses choice '|'; lower it as an indexed axiom set"])
    axioms, functional = lower(program, fname)
    singleton = SingletonAxiomSet(lambda a: axioms.children(a, 0), "FromProgram", fname)
    return singleton, Functional(lambda a, f: functional(a, 0, f), fname)


def input_element(program: Program, fname: str, a):
    """Wrap a bare natural into a 1-tuple for unary functions; leave anything else alone."""
    fd = program.function(fname)
    if fd is not None and fd.arity == 1 and isinstance(a, Nat):
        return Tuple((a,))
    return a


__all__ = ["lower", "lower_singleton", "input_element", "match"]

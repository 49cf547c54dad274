"""Evaluating recursive definitions given as one-step functionals.

A functional ``H`` computes ``f(a)`` from ``a`` and a callback giving
``f(y)`` for the children ``y`` of ``a``; the callback refuses any other
argument.  Four evaluators are provided:

* :func:`eval_certified` recurses on a cover certificate of ``a <| {}``
  and needs no fuel;
* :func:`eval_extracted` is the certificate-free program, bounded by fuel;
* :func:`eval_relative` additionally answers calls on a finite oracle table
  without running ``H``;
* :func:`enumerate_outcomes` collects every result of a nondeterministic
  functional over an indexed axiom set.

None of them uses Python recursion: a step that asks for a child value not
computed yet is abandoned, the child is evaluated, and the step is replayed.
Functionals must therefore be pure.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Union

from .axioms import IndexedAxiomSet, SingletonAxiomSet
from .cover import CoverProof, explain_proof, pi, proof_height
from .elements import Element, Nat, Tuple, Atom, canonical, decode, encode, sort_key
from .errors import CertificateFormatError, ContractError, InvalidCertificate
from .subsets import EMPTY, Finite

_ELEMENT_TYPES = (Nat, Atom, Tuple)


@dataclass(frozen=True)
class Functional:
    step: Callable[[Element, Callable[[Element], Element]], Element]
    name: str = "H"

    def __call__(self, a, recurse):
        return self.step(a, recurse)


@dataclass(frozen=True)
class NondetFunctional:
    step: Callable[[Element, int, Callable[[Element], Element]], Element]
    name: str = "N"

    def __call__(self, a, index, recurse):
        return self.step(a, index, recurse)


@dataclass(frozen=True)
class Divergence:
    """Evaluation did not finish: ``reason`` is ``"fuel_exhausted"`` or ``"cycle"``."""

    reason: str
    element: Element
    calls: int


Outcome = Union[Element, Divergence]


class OracleTable(Mapping):
    """Known values of the function on a finite set of inputs."""

    def __init__(self, entries=()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        self._entries = {k: v for k, v in entries}
        for k, v in self._entries.items():
            if not isinstance(k, _ELEMENT_TYPES) or not isinstance(v, _ELEMENT_TYPES):
                raise TypeError(f"oracle entries must map elements to elements: {k!r} -> {v!r}")

    def __getitem__(self, key):
        return self._entries[key]

    def __iter__(self):
        return iter(canonical(self._entries))

    def __len__(self):
        return len(self._entries)

    def domain(self) -> Finite:
        return Finite(tuple(self._entries))

    def to_json(self) -> dict:
        return {"entries": [{"key": encode(k), "value": encode(self._entries[k])} for k in self]}

    @classmethod
    def from_json(cls, obj) -> "OracleTable":
        try:
            return cls((decode(e["key"]), decode(e["value"])) for e in obj["entries"])
        except (KeyError, TypeError) as exc:
            raise CertificateFormatError(f"malformed oracle table: {exc}") from None


class _Need(BaseException):
    # BaseException so that a functional's own ``except Exception`` cannot eat it
    def __init__(self, element):
        self.element = element


class _Frame:
    __slots__ = ("element", "kids", "results", "proof")

    def __init__(self, element, kids, proof=None):
        self.element = element
        self.kids = kids
        self.results = {}
        self.proof = proof


def _guarded(frame, shared, table):
    def recurse(y):
        if y not in frame.kids:
            raise ContractError(
                f"functional asked for {encode(y) if isinstance(y, _ELEMENT_TYPES) else y!r} "
                f"while evaluating {encode(frame.element)}, which is not one of its children")
        if y in frame.results:
            return frame.results[y]
        if table is not None and y in table:
            return table[y]
        if shared is not None and y in shared:
            return shared[y]
        raise _Need(y)

    return recurse


def _check_value(v, a):
    if not isinstance(v, _ELEMENT_TYPES):
        raise ContractError(f"functional returned a non-element {v!r} at {encode(a)}")
    return v


def _drive(h, s, root, fuel, memo, table=None, certificate=None, max_depth=None):
    shared = {} if memo else None
    on_stack = {root}
    calls = 1

    def frame_for(x, proof=None):
        return _Frame(x, frozenset(s.children(x)), proof)

    stack = [frame_for(root, certificate)]
    while True:
        fr = stack[-1]
        try:
            value = _check_value(h(fr.element, _guarded(fr, shared, table)), fr.element)
        except _Need as need:
            y = need.element
            if y in on_stack:
                return Divergence("cycle", y, calls)
            calls += 1
            if fuel is not None and calls > fuel:
                return Divergence("fuel_exhausted", y, calls - 1)
            if max_depth is not None and len(stack) > max_depth:
                raise InvalidCertificate(f"recursion deeper than the certificate at {encode(y)}")
            proof = pi(s, fr.element, fr.proof, y) if certificate is not None else None
            on_stack.add(y)
            stack.append(frame_for(y, proof))
            continue
        stack.pop()
        on_stack.discard(fr.element)
        if shared is not None:
            shared[fr.element] = value
        if not stack:
            return value
        stack[-1].results[fr.element] = value


def eval_certified(h: Functional, s: SingletonAxiomSet, a: Element, p: CoverProof,
                   memo: bool = False) -> Element:
    """Run ``h`` by recursion on a checked certificate of ``a <| {}``.

    Each recursive call on a child ``y`` carries the sub-certificate
    ``pi(a, p, y)``.  No fuel is needed; a depth cap equal to the certificate
    height turns a corrupt certificate into an error instead of a hang.
    """
    failure = explain_proof(s, EMPTY, a, p)
    if failure is not None:
        raise InvalidCertificate(str(failure))
    result = _drive(h, s, a, None, memo, certificate=p, max_depth=proof_height(p) + 1)
    if isinstance(result, Divergence):
        # a checked certificate of a <| {} rules out cycles below a
        raise InvalidCertificate(f"certificate admits a cycle at {encode(result.element)}")
    return result


def eval_extracted(h: Functional, s: SingletonAxiomSet, a: Element, fuel: int = 100_000,
                   memo: bool = True) -> Outcome:
    """Plain general recursion: ``f(a) = h(a, f)`` with one unit of fuel per call."""
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    return _drive(h, s, a, fuel, memo)


def eval_relative(h: Functional, s: SingletonAxiomSet, a: Element, table: Mapping,
                  fuel: int = 100_000, memo: bool = True) -> Outcome:
    """Like :func:`eval_extracted`, but calls on inputs in ``table`` return the table value."""
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    if a in table:
        return table[a]
    return _drive(h, s, a, fuel, memo, table=table)


def lift_functional(h: Functional, table: Mapping) -> Functional:
    """The functional that answers from ``table`` first and defers to ``h`` elsewhere."""

    def step(a, recurse):
        if a in table:
            return table[a]
        return h(a, recurse)

    return Functional(step, f"{h.name}|table")


def enumerate_outcomes(n: NondetFunctional, s: IndexedAxiomSet, a: Element,
                       fuel: int = 100_000) -> Union[frozenset, Divergence]:
    """Every value reachable by resolving the choice of axiom index at every call.

    ``outcomes(x)`` is the union over indexes ``i`` of ``n(x, i, sigma)`` where
    ``sigma`` ranges over all selections of one outcome per child in
    ``C(x, i)``.  A call cycle means some resolution never terminates and is
    reported as a divergence; so is exploring more than ``fuel`` elements.
    """
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    outcomes = {}
    on_stack = {a}
    calls = 1

    def alternatives(x):
        return [(i, s.children(x, i)) for i in s.indexes(x)]

    stack = [(a, alternatives(a))]
    while stack:
        x, alts = stack[-1]
        pending = next((y for _, kids in alts for y in kids if y not in outcomes), None)
        if pending is not None:
            if pending in on_stack:
                return Divergence("cycle", pending, calls)
            calls += 1
            if calls > fuel:
                return Divergence("fuel_exhausted", pending, calls - 1)
            on_stack.add(pending)
            stack.append((pending, alternatives(pending)))
            continue
        values = set()
        for i, kids in alts:
            choices = [sorted(outcomes[y], key=sort_key) for y in kids]
            for sigma in itertools.product(*choices):
                frame = _Frame(x, frozenset(kids))
                frame.results = dict(zip(kids, sigma))
                values.add(_check_value(n(x, i, _guarded(frame, None, None)), x))
        outcomes[x] = frozenset(values)
        stack.pop()
        on_stack.discard(x)
    return outcomes[a]


# Functionals for the builtin examples.

def _fib_step(a, f):
    if a.value < 2:
        return a
    return Nat(f(Nat(a.value - 1)).value + f(Nat(a.value - 2)).value)


def fib_functional() -> Functional:
    return Functional(_fib_step, "fib")


def _choice_step(a, i, f):
    if a.value < 2:
        return a
    return f(Nat(a.value - 2 + i))


def choice_functional() -> NondetFunctional:
    return NondetFunctional(_choice_step, "choice")


def as_deterministic(n: NondetFunctional) -> Functional:
    """View a nondeterministic functional whose axiom set has the single index 0 as deterministic."""
    return Functional(lambda a, f: n(a, 0, f), n.name)


def as_nondeterministic(h: Functional) -> NondetFunctional:
    return NondetFunctional(lambda a, i, f: h(a, f), h.name)

"""Axiom sets: the call relation of a recursive program.

A singleton axiom set maps each element ``a`` to one finite list of
children ``C(a)``.  An indexed axiom set offers several alternatives
``C(a, i)``, one per index ``i`` in ``indexes(a)``.  Both wrap a user
provider and normalise its output, so children are always canonically
sorted and duplicate-free.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Mapping, Union

from .elements import Element, Nat, canonical, decode
from .errors import ElementSyntaxError, IndexOutOfRange
from .subsets import Subset, member

PROVENANCES = ("ExplicitGraph", "FromRelation", "FromProgram", "Builtin", "Transformed")


class SingletonAxiomSet:
    def __init__(self, provider: Callable[[Element], Iterable[Element]],
                 provenance: str = "ExplicitGraph", description: str = ""):
        if provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {provenance!r}")
        self._provider = provider
        self.provenance = provenance
        self.description = description

    def children(self, a: Element, index: int = 0) -> tuple:
        if index != 0:
            raise IndexOutOfRange(a, index)
        return canonical(self._provider(a))

    def indexes(self, a: Element) -> tuple:
        return (0,)

    def as_indexed(self) -> "IndexedAxiomSet":
        return IndexedAxiomSet(lambda a: (0,), lambda a, i: self._provider(a),
                               self.provenance, self.description)

    def __repr__(self):
        return f"<SingletonAxiomSet {self.provenance} {self.description}>".replace(" >", ">")


class IndexedAxiomSet:
    def __init__(self, indexes: Callable[[Element], Iterable[int]],
                 children: Callable[[Element, int], Iterable[Element]],
                 provenance: str = "ExplicitGraph", description: str = ""):
        if provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {provenance!r}")
        self._indexes = indexes
        self._children = children
        self.provenance = provenance
        self.description = description

    def indexes(self, a: Element) -> tuple:
        return tuple(sorted(set(self._indexes(a))))

    def children(self, a: Element, index: int) -> tuple:
        if index not in self.indexes(a):
            raise IndexOutOfRange(a, index)
        return canonical(self._children(a, index))

    def __repr__(self):
        return f"<IndexedAxiomSet {self.provenance} {self.description}>".replace(" >", ">")


AxiomSet = Union[SingletonAxiomSet, IndexedAxiomSet]


def is_singleton(s) -> bool:
    return isinstance(s, SingletonAxiomSet)


def _image(pairs):
    image = defaultdict(set)
    for x, y in pairs:
        image[x].add(y)
    frozen = {x: canonical(ys) for x, ys in image.items()}
    return lambda a: frozen.get(a, ())


def from_relation(pairs: Iterable[tuple]) -> SingletonAxiomSet:
    """``C(x) = {y | (x, y) in pairs}``; elements never on the left get no children."""
    return SingletonAxiomSet(_image(pairs), "FromRelation")


def from_graph(graph: Mapping[Element, Iterable[Element]]) -> SingletonAxiomSet:
    frozen = {x: canonical(ys) for x, ys in graph.items()}
    return SingletonAxiomSet(lambda a: frozen.get(a, ()), "ExplicitGraph")


def from_indexed_graph(graph: Mapping[Element, Iterable[Iterable[Element]]]) -> IndexedAxiomSet:
    """Index ``i`` of element ``a`` is the i-th child list; unlisted elements get one empty axiom."""
    frozen = {x: tuple(canonical(ys) for ys in alts) for x, alts in graph.items()}

    def indexes(a):
        return range(len(frozen[a])) if a in frozen else (0,)

    def children(a, i):
        return frozen[a][i] if a in frozen else ()

    return IndexedAxiomSet(indexes, children, "ExplicitGraph")


def transform_axioms(s: SingletonAxiomSet, u: Subset) -> SingletonAxiomSet:
    """Cut the axiom set at ``u``: members of ``u`` lose all their children."""

    def provider(a):
        return () if member(u, a) else s.children(a)

    return SingletonAxiomSet(provider, "Transformed",
                             f"cut of {s.provenance}")


def axioms_from_json(obj) -> SingletonAxiomSet | IndexedAxiomSet:
    """Decode ``{"edges": [[x, y], ...], "indexed": {x: [[...], ...]}}``.

    With no ``indexed`` key the result is a singleton set built from the edges.
    Otherwise it is indexed: listed elements use their alternatives, other
    elements fall back to a single axiom holding their edge successors.
    """
    if not isinstance(obj, dict) or not ({"edges", "indexed"} & obj.keys()):
        raise ElementSyntaxError("graph JSON needs an 'edges' or 'indexed' key")
    try:
        pairs = [(decode(x), decode(y)) for x, y in obj.get("edges", [])]
        if "indexed" not in obj:
            return SingletonAxiomSet(_image(pairs), "ExplicitGraph")
        graph = defaultdict(list)
        for x, y in pairs:
            graph[x].append(y)
        alts = {x: [ys] for x, ys in graph.items()}
        for key, lists in obj["indexed"].items():
            alts[decode(key)] = [[decode(y) for y in ys] for ys in lists]
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ElementSyntaxError):
            raise
        raise ElementSyntaxError(f"malformed graph JSON: {exc}") from None
    return from_indexed_graph(alts)


# Builtin axiom sets for the running examples over the naturals.

def _fib_children(a):
    if isinstance(a, Nat) and a.value >= 2:
        return (Nat(a.value - 2), Nat(a.value - 1))
    return ()


def fib_axioms() -> SingletonAxiomSet:
    """0 and 1 have no children; n+2 has children n and n+1."""
    return SingletonAxiomSet(_fib_children, "Builtin", "fib")


def succ_axioms() -> SingletonAxiomSet:
    return SingletonAxiomSet(
        lambda a: (Nat(a.value + 1),) if isinstance(a, Nat) else (), "Builtin", "succ")


def choice_axioms() -> IndexedAxiomSet:
    """f(0)=0, f(1)=1, f(n+2) = f(n) | f(n+1): index 0 calls n, index 1 calls n+1."""

    def indexes(a):
        return (0, 1) if isinstance(a, Nat) and a.value >= 2 else (0,)

    def children(a, i):
        if isinstance(a, Nat) and a.value >= 2:
            return (Nat(a.value - 2 + i),)
        return ()

    return IndexedAxiomSet(indexes, children, "Builtin", "choice")

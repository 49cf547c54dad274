"""Positivity ``a >< F``: divergence that stays inside ``F``.

The positivity predicate is the greatest relation such that ``a >< F``
forces ``a`` into ``F`` and, for every axiom index of ``a``, some child that
is again positive.  On a finite reachable set it is computed by repeatedly
discarding elements that violate one of these two conditions.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Optional, Union

from .axioms import AxiomSet, SingletonAxiomSet, is_singleton
from .cover import LassoWitness, _OverBudget, _reachable, _walk_ok, lasso_to_json
from .elements import Element, canonical, encode
from .errors import BudgetExhausted
from .subsets import UNIVERSAL, Subset, member, subset_to_json


@dataclass(frozen=True)
class CoinductionWitness:
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", canonical(self.elements))


@dataclass(frozen=True)
class Positive:
    witness: CoinductionWitness
    lasso: Optional[LassoWitness] = None


@dataclass(frozen=True)
class NotPositive:
    pass


@dataclass(frozen=True)
class PositivityUnknown:
    explored: int
    budget: int


PositivityResult = Union[Positive, NotPositive, PositivityUnknown]


def positivity(s: AxiomSet, f: Subset, a: Element, budget: int = 100_000) -> PositivityResult:
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not member(f, a):
        return NotPositive()
    try:
        order, axioms = _reachable(s, a, budget, lambda x: member(f, x))
    except _OverBudget as exc:
        return PositivityUnknown(exc.args[0], budget)

    alive = {x for x in order if axioms[x] is not None}
    # support[(b, i)] counts the children of b at index i that are still alive
    support = {}
    parents = defaultdict(list)
    queue = deque()
    for b in order:
        if b not in alive:
            continue
        for i, kids in axioms[b]:
            support[(b, i)] = sum(1 for y in kids if y in alive)
            for y in kids:
                parents[y].append((b, i))
            if support[(b, i)] == 0:
                queue.append(b)
    removed = set()
    while queue:
        b = queue.popleft()
        if b in removed:
            continue
        removed.add(b)
        alive.discard(b)
        for key in parents[b]:
            support[key] -= 1
            if support[key] == 0 and key[0] in alive:
                queue.append(key[0])

    if a not in alive:
        return NotPositive()
    witness = CoinductionWitness(tuple(alive))
    lasso = _extract_lasso(s, alive, a) if is_singleton(s) else None
    return Positive(witness, lasso)


def _extract_lasso(s: SingletonAxiomSet, alive, a) -> LassoWitness:
    trail = [a]
    position = {a: 0}
    x = a
    while True:
        x = next(y for y in s.children(x) if y in alive)
        if x in position:
            start = position[x]
            return LassoWitness(trail[:start], trail[start:])
        position[x] = len(trail)
        trail.append(x)


def check_coinduction(s: AxiomSet, f: Subset, p: CoinductionWitness, a: Element) -> bool:
    members = set(p.elements)
    if a not in members:
        return False
    for b in p.elements:
        if not member(f, b):
            return False
        for i in s.indexes(b):
            if not any(y in members for y in s.children(b, i)):
                return False
    return True


def check_positive_lasso(s: SingletonAxiomSet, f: Subset, a: Element, lasso: LassoWitness) -> bool:
    """Lasso starts at ``a``, stays in ``f`` and follows the child relation (cycle pumped twice)."""
    return _walk_ok(s, a, lasso, lambda x: member(f, x))


def infinite_chain(s: SingletonAxiomSet, a: Element, budget: int = 100_000) -> Optional[LassoWitness]:
    """A lasso presenting an infinite call chain from ``a``, or ``None`` if there is none."""
    result = positivity(s, UNIVERSAL, a, budget)
    if isinstance(result, PositivityUnknown):
        raise BudgetExhausted(result.explored, result.budget)
    if isinstance(result, Positive):
        return result.lasso
    return None


def positivity_to_json(result: PositivityResult, f: Subset, root: Element) -> dict:
    doc = {"query": {"f": subset_to_json(f), "root": encode(root)}}
    if isinstance(result, Positive):
        doc["result"] = "positive"
        doc["coinductionSet"] = [encode(x) for x in result.witness.elements]
        if result.lasso is not None:
            doc["lasso"] = lasso_to_json(result.lasso)
    elif isinstance(result, NotPositive):
        doc["result"] = "notPositive"
    else:
        doc["result"] = "unknown"
        doc["explored"] = result.explored
        doc["budget"] = result.budget
    return doc

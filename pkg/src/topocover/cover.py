"""Cover proofs (termination certificates), their checker and their search.

A proof of ``a <| U`` is a finite tree of two node kinds:

* ``Refl(a)`` -- ``a`` is a member of ``U``;
* ``Inf(a, i, ks)`` -- ``i`` is an axiom index of ``a`` and ``ks[j]`` proves
  ``C(a, i)[j] <| U`` for every position ``j`` of the canonical child list.

Membership evidence is not stored: subsets are decidable, so the checker
recomputes it.  Sub-proofs produced by :func:`derive` are shared between
parents (the tree is stored as a DAG); every traversal here memoises on node
identity so the cost stays linear in the number of distinct nodes.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from .axioms import AxiomSet, SingletonAxiomSet, is_singleton
from .elements import Element, canonical, decode, encode
from .errors import (
    CertificateFormatError,
    ImpossibleRefl,
    IndexOutOfRange,
    InvalidInput,
    MissingLeafProof,
    NotAChild,
)
from .subsets import EMPTY, Finite, Subset, member, subset_to_json


@dataclass(frozen=True)
class Refl:
    element: Element


@dataclass(frozen=True)
class Inf:
    element: Element
    index: int
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


CoverProof = Union[Refl, Inf]


@dataclass(frozen=True)
class LassoWitness:
    stem: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("a lasso needs a non-empty cycle")

    @property
    def root(self):
        return (self.stem or self.cycle)[0]


@dataclass(frozen=True)
class UncoveredSetWitness:
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", canonical(self.elements))


@dataclass(frozen=True)
class Covered:
    proof: CoverProof


@dataclass(frozen=True)
class Uncovered:
    witness: Union[LassoWitness, UncoveredSetWitness]


@dataclass(frozen=True)
class Unknown:
    explored: int
    budget: int


CoverResult = Union[Covered, Uncovered, Unknown]


@dataclass(frozen=True)
class ProofFailure:
    """Where and why a certificate failed: ``path`` runs from the root to the bad node."""

    path: tuple
    reason: str

    def __str__(self):
        trail = " -> ".join(encode(e) for e in self.path)
        return f"at {trail}: {self.reason}"


# ---------------------------------------------------------------------------
# checking

def explain_proof(s: AxiomSet, u: Subset, a: Element, p: CoverProof) -> Optional[ProofFailure]:
    """Return ``None`` if ``p`` proves ``a <| u`` over ``s``, else the first failure.

    Nodes are visited in pre-order, so the reported failure is the leftmost
    one.  Axiom-set errors raised by the provider are not swallowed.
    """
    if not isinstance(p, (Refl, Inf)):
        return ProofFailure((a,), f"not a proof node: {p!r}")
    if p.element != a:
        return ProofFailure((a,), f"proof is for {encode(p.element)}, expected {encode(a)}")
    # paths are linked lists (element, parent) so deep proofs stay linear
    def trail(link):
        out = []
        while link is not None:
            out.append(link[0])
            link = link[1]
        return tuple(reversed(out))

    valid = set()
    stack = [(p, (a, None), False)]
    while stack:
        node, link, post = stack.pop()
        if post:
            valid.add(id(node))
            continue
        if id(node) in valid:
            continue
        x = node.element
        if isinstance(node, Refl):
            if not member(u, x):
                return ProofFailure(trail(link), f"refl: {encode(x)} is not a member of U")
            valid.add(id(node))
            continue
        if not isinstance(node, Inf):
            return ProofFailure(trail(link), f"not a proof node: {node!r}")
        if node.index not in s.indexes(x):
            return ProofFailure(trail(link), f"inf: {node.index} is not an axiom index of {encode(x)}")
        kids = s.children(x, node.index)
        if len(kids) != len(node.children):
            return ProofFailure(
                trail(link), f"inf: {len(node.children)} sub-proofs for {len(kids)} children")
        for y, k in zip(kids, node.children):
            if not isinstance(k, (Refl, Inf)):
                return ProofFailure(trail((y, link)), f"not a proof node: {k!r}")
            if k.element != y:
                return ProofFailure(
                    trail((y, link)), f"sub-proof is for {encode(k.element)}, expected {encode(y)}")
        stack.append((node, link, True))
        for y, k in reversed(list(zip(kids, node.children))):
            if id(k) not in valid:
                stack.append((k, (y, link), False))
    return None


def check_proof(s: AxiomSet, u: Subset, a: Element, p: CoverProof) -> bool:
    return explain_proof(s, u, a, p) is None


# ---------------------------------------------------------------------------
# search

class _OverBudget(Exception):
    pass


def derive(s: AxiomSet, u: Subset, a: Element, budget: int = 100_000) -> CoverResult:
    """Decide ``a <| u`` by search, exploring at most ``budget`` distinct elements.

    Singleton axiom sets use a memoised depth-first search: meeting an
    element that is still in progress closes a cycle, and since coverage of a
    node needs all of its children, that cycle refutes the root.  Indexed
    axiom sets are handled by enumerating the reachable elements and
    saturating the covered set round by round.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if is_singleton(s):
        return _derive_singleton(s, u, a, budget)
    return _derive_indexed(s, u, a, budget)


def _derive_singleton(s, u, a, budget):
    proofs = {}
    on_path = {}
    path = []
    explored = 0

    def enter(x):
        nonlocal explored
        explored += 1
        if explored > budget:
            raise _OverBudget
        if member(u, x):
            proofs[x] = Refl(x)
            return
        on_path[x] = len(path)
        path.append([x, s.children(x), 0])

    try:
        enter(a)
        while path:
            frame = path[-1]
            x, kids, j = frame
            if j == len(kids):
                proofs[x] = Inf(x, 0, tuple(proofs[k] for k in kids))
                path.pop()
                del on_path[x]
                continue
            frame[2] = j + 1
            y = kids[j]
            if y in proofs:
                continue
            if y in on_path:
                start = on_path[y]
                trail = [f[0] for f in path]
                return Uncovered(LassoWitness(trail[:start], trail[start:]))
            enter(y)
    except _OverBudget:
        return Unknown(explored, budget)
    return Covered(proofs[a])


def _reachable(s, a, budget, expand):
    """Breadth-first enumeration of elements reachable from ``a`` through all indexes.

    Elements for which ``expand`` is false are recorded but not expanded.
    Returns ``(order, axioms)`` with ``axioms[x] = [(i, children), ...]``, or
    raises ``_OverBudget``.
    """
    order = [a]
    seen = {a}
    axioms = {}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if not expand(x):
            axioms[x] = None
            continue
        alts = [(i, s.children(x, i)) for i in s.indexes(x)]
        axioms[x] = alts
        for _, kids in alts:
            for y in kids:
                if y not in seen:
                    if len(seen) >= budget:
                        raise _OverBudget(len(seen) + 1)
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
    return order, axioms


def _derive_indexed(s, u, a, budget):
    try:
        order, axioms = _reachable(s, a, budget, lambda x: not member(u, x))
    except _OverBudget as exc:
        return Unknown(exc.args[0], budget)
    proofs = {}
    changed = True
    while changed:
        changed = False
        for b in order:
            if b in proofs:
                continue
            alts = axioms[b]
            if alts is None:
                proofs[b] = Refl(b)
                changed = True
                continue
            for i, kids in alts:
                if all(k in proofs for k in kids):
                    proofs[b] = Inf(b, i, tuple(proofs[k] for k in kids))
                    changed = True
                    break
    if a in proofs:
        return Covered(proofs[a])
    # restrict the uncovered complement to what hangs below the root
    keep = {a}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for _, kids in axioms[x]:
            for y in kids:
                if y not in proofs and y not in keep:
                    keep.add(y)
                    queue.append(y)
    return Uncovered(UncoveredSetWitness(tuple(keep)))


# ---------------------------------------------------------------------------
# witnesses

def _walk_ok(s, start, lasso, allowed: Callable[[Element], bool]) -> bool:
    """Follow stem, then the cycle twice, checking every step is a child step."""
    if lasso.root != start:
        return False
    walk = list(lasso.stem) + list(lasso.cycle) * 2 + [lasso.cycle[0]]
    if not all(allowed(x) for x in walk):
        return False
    return all(nxt in s.children(cur) for cur, nxt in zip(walk, walk[1:]))


def check_lasso(s: SingletonAxiomSet, u: Subset, a: Element, lasso: LassoWitness) -> bool:
    return _walk_ok(s, a, lasso, lambda x: not member(u, x))


def check_uncovered_set(s: AxiomSet, u: Subset, a: Element, w: UncoveredSetWitness) -> bool:
    members = set(w.elements)
    if a not in members:
        return False
    for b in w.elements:
        if member(u, b):
            return False
        for i in s.indexes(b):
            if not any(y in members for y in s.children(b, i)):
                return False
    return True


def check_witness(s: AxiomSet, u: Subset, a: Element, w) -> bool:
    if isinstance(w, LassoWitness):
        return is_singleton(s) and check_lasso(s, u, a, w)
    if isinstance(w, UncoveredSetWitness):
        return check_uncovered_set(s, u, a, w)
    return False


# ---------------------------------------------------------------------------
# admissible rules and destructors

def axiom_condition(s: AxiomSet, a: Element, i: int = 0) -> Inf:
    """Proof of ``a <| C(a, i)``: one refl leaf per child."""
    if i not in s.indexes(a):
        raise IndexOutOfRange(a, i)
    return Inf(a, i, tuple(Refl(y) for y in s.children(a, i)))


def _leaves(p):
    out = set()
    seen = set()
    stack = [p]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Refl):
            out.add(node.element)
        else:
            stack.extend(node.children)
    return out


def transitivity(s: AxiomSet, u: Subset, v: Subset, p: CoverProof,
                 g: Mapping[Element, CoverProof]) -> CoverProof:
    """From ``a <| u`` and a proof ``g[x]`` of ``x <| v`` for each refl leaf ``x``, get ``a <| v``.

    Every refl leaf is replaced by the supplied proof; inf nodes are kept.
    """
    a = p.element
    failure = explain_proof(s, u, a, p)
    if failure is not None:
        raise InvalidInput(f"first premise does not check: {failure}")
    leaves = canonical(_leaves(p))
    for x in leaves:
        if x not in g:
            raise MissingLeafProof(x)
    for x in leaves:
        failure = explain_proof(s, v, x, g[x])
        if failure is not None:
            raise InvalidInput(f"proof supplied for leaf {encode(x)} does not check: {failure}")

    grafted = {}
    stack = [(p, False)]
    while stack:
        node, post = stack.pop()
        if id(node) in grafted:
            continue
        if isinstance(node, Refl):
            grafted[id(node)] = g[node.element]
        elif post:
            grafted[id(node)] = Inf(node.element, node.index,
                                    tuple(grafted[id(k)] for k in node.children))
        else:
            stack.append((node, True))
            stack.extend((k, False) for k in node.children if id(k) not in grafted)
    return grafted[id(p)]


def pi(s: SingletonAxiomSet, a: Element, p: CoverProof, y: Element) -> CoverProof:
    """The sub-proof of ``y <| {}`` carried by a proof of ``a <| {}``.

    The caller is responsible for ``p`` being a checked proof; only the root
    node is inspected here.
    """
    if isinstance(p, Refl):
        raise ImpossibleRefl(f"refl node at {encode(p.element)} cannot prove membership in the empty set")
    if p.element != a:
        raise InvalidInput(f"proof is for {encode(p.element)}, expected {encode(a)}")
    kids = s.children(a)
    try:
        j = kids.index(y)
    except ValueError:
        raise NotAChild(f"{encode(y)} is not a child of {encode(a)}") from None
    if len(p.children) != len(kids):
        raise InvalidInput(f"proof at {encode(a)} is misaligned with its children")
    return p.children[j]


def bar_leaves(p: CoverProof) -> Finite:
    """The finite set of elements at refl leaves: the part of U the proof actually uses."""
    return Finite(tuple(_leaves(p)))


def no_self_membership(s: SingletonAxiomSet, a: Element) -> bool:
    return a not in s.children(a)


def proof_size(p: CoverProof) -> int:
    """Number of nodes of the proof read as a tree (shared nodes counted each time)."""
    sizes = {}
    stack = [(p, False)]
    while stack:
        node, post = stack.pop()
        if id(node) in sizes:
            continue
        if isinstance(node, Refl):
            sizes[id(node)] = 1
        elif post:
            sizes[id(node)] = 1 + sum(sizes[id(k)] for k in node.children)
        else:
            stack.append((node, True))
            stack.extend((k, False) for k in node.children)
    return sizes[id(p)]


def proof_height(p: CoverProof) -> int:
    heights = {}
    stack = [(p, False)]
    while stack:
        node, post = stack.pop()
        if id(node) in heights:
            continue
        if isinstance(node, Refl) or not node.children:
            heights[id(node)] = 0
        elif post:
            heights[id(node)] = 1 + max(heights[id(k)] for k in node.children)
        else:
            stack.append((node, True))
            stack.extend((k, False) for k in node.children)
    return heights[id(p)]


# ---------------------------------------------------------------------------
# JSON

def proof_to_json(p: CoverProof) -> dict:
    out = {}
    stack = [(p, False)]
    while stack:
        node, post = stack.pop()
        if id(node) in out:
            continue
        if isinstance(node, Refl):
            out[id(node)] = {"element": encode(node.element), "rule": "refl"}
        elif post:
            out[id(node)] = {
                "element": encode(node.element),
                "rule": "inf",
                "index": node.index,
                "children": [out[id(k)] for k in node.children],
            }
        else:
            stack.append((node, True))
            stack.extend((k, False) for k in node.children)
    return out[id(p)]


def proof_from_json(obj) -> CoverProof:
    built = {}
    stack = [(obj, False)]
    try:
        while stack:
            node, post = stack.pop()
            if id(node) in built:
                continue
            if not isinstance(node, dict):
                raise CertificateFormatError(f"proof node must be an object, got {node!r}")
            rule = node.get("rule")
            element = decode(node["element"])
            if rule == "refl":
                built[id(node)] = Refl(element)
            elif rule != "inf":
                raise CertificateFormatError(f"unknown rule {rule!r}")
            elif post:
                built[id(node)] = Inf(element, node["index"],
                                      tuple(built[id(k)] for k in node["children"]))
            else:
                index, kids = node.get("index"), node.get("children")
                if isinstance(index, bool) or not isinstance(index, int) or index < 0:
                    raise CertificateFormatError(f"bad index {index!r}")
                if not isinstance(kids, list):
                    raise CertificateFormatError("inf node needs a 'children' list")
                stack.append((node, True))
                stack.extend((k, False) for k in kids)
    except KeyError as exc:
        raise CertificateFormatError(f"proof node missing key {exc}") from None
    except ValueError as exc:
        if isinstance(exc, CertificateFormatError):
            raise
        raise CertificateFormatError(str(exc)) from None
    return built[id(obj)]


def lasso_to_json(w: LassoWitness) -> dict:
    return {"stem": [encode(x) for x in w.stem], "cycle": [encode(x) for x in w.cycle]}


def witness_to_json(w) -> dict:
    if isinstance(w, LassoWitness):
        return {"lasso": lasso_to_json(w)}
    return {"uncoveredSet": [encode(x) for x in w.elements]}


def witness_from_json(obj):
    try:
        if "lasso" in obj:
            lasso = obj["lasso"]
            return LassoWitness(tuple(decode(x) for x in lasso["stem"]),
                                tuple(decode(x) for x in lasso["cycle"]))
        return UncoveredSetWitness(tuple(decode(x) for x in obj["uncoveredSet"]))
    except (KeyError, TypeError) as exc:
        raise CertificateFormatError(f"malformed witness: {exc}") from None


def result_to_json(result: CoverResult, u: Subset, root: Element) -> dict:
    doc = {"query": {"u": subset_to_json(u), "root": encode(root)}}
    if isinstance(result, Covered):
        doc["result"] = "covered"
        doc["certificate"] = proof_to_json(result.proof)
    elif isinstance(result, Uncovered):
        doc["result"] = "uncovered"
        doc["witness"] = witness_to_json(result.witness)
    else:
        doc["result"] = "unknown"
        doc["explored"] = result.explored
        doc["budget"] = result.budget
    return doc


__all__ = [
    "EMPTY", "Refl", "Inf", "CoverProof", "LassoWitness", "UncoveredSetWitness",
    "Covered", "Uncovered", "Unknown", "CoverResult", "ProofFailure",
    "explain_proof", "check_proof", "derive", "check_lasso", "check_uncovered_set",
    "check_witness", "axiom_condition", "transitivity", "pi", "bar_leaves",
    "no_self_membership", "proof_size", "proof_height", "proof_to_json",
    "proof_from_json", "witness_to_json", "witness_from_json", "lasso_to_json",
    "result_to_json",
]

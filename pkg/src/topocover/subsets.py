"""Decidable subsets of the element universe and their JSON form."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .elements import Element, Nat, canonical, decode, encode
from .errors import ElementSyntaxError

COMPARATOR_KINDS = ("even", "odd", "lt", "ge")
OPS = ("union", "intersection", "complement")


@dataclass(frozen=True)
class Finite:
    elements: tuple = ()
    _members: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self):
        elems = canonical(self.elements)
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_members", frozenset(elems))

    @classmethod
    def of(cls, *elements) -> "Finite":
        return cls(tuple(elements))

    def __contains__(self, e):
        return e in self._members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class Comparator:
    """Arithmetic predicate on naturals; any non-natural element is outside it."""

    kind: str
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in COMPARATOR_KINDS:
            raise ValueError(f"unknown comparator kind {self.kind!r}")
        if self.kind in ("lt", "ge") and (not isinstance(self.k, int) or self.k < 0):
            raise ValueError(f"comparator {self.kind!r} needs a natural bound k")


@dataclass(frozen=True)
class Compound:
    op: str
    operands: tuple

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"unknown subset operation {self.op!r}")
        operands = tuple(self.operands)
        if self.op == "complement" and len(operands) != 1:
            raise ValueError("complement takes exactly one operand")
        object.__setattr__(self, "operands", operands)


Subset = Union[Finite, Comparator, Compound]

EMPTY = Finite()
UNIVERSAL = Compound("complement", (EMPTY,))


def union(*operands) -> Compound:
    return Compound("union", operands)


def intersection(*operands) -> Compound:
    return Compound("intersection", operands)


def complement(operand) -> Compound:
    return Compound("complement", (operand,))


def member(u: Subset, e: Element) -> bool:
    if isinstance(u, Finite):
        return e in u
    if isinstance(u, Comparator):
        if not isinstance(e, Nat):
            return False
        v = e.value
        if u.kind == "even":
            return v % 2 == 0
        if u.kind == "odd":
            return v % 2 == 1
        if u.kind == "lt":
            return v < u.k
        return v >= u.k
    if u.op == "union":
        return any(member(x, e) for x in u.operands)
    if u.op == "intersection":
        return all(member(x, e) for x in u.operands)
    return not member(u.operands[0], e)


def is_empty_finite(u: Subset) -> bool:
    return isinstance(u, Finite) and not u.elements


def subset_to_json(u: Subset):
    if isinstance(u, Finite):
        return {"finite": [encode(e) for e in u.elements]}
    if isinstance(u, Comparator):
        cmp = {"kind": u.kind}
        if u.k is not None:
            cmp["k"] = u.k
        return {"cmp": cmp}
    return {"op": u.op, "args": [subset_to_json(x) for x in u.operands]}


def subset_from_json(obj) -> Subset:
    try:
        if not isinstance(obj, dict) or len(obj) == 0:
            raise ElementSyntaxError(f"subset must be a JSON object, got {obj!r}")
        if "finite" in obj:
            return Finite(tuple(decode(x) for x in obj["finite"]))
        if "cmp" in obj:
            c = obj["cmp"]
            return Comparator(c["kind"], c.get("k"))
        if "op" in obj:
            return Compound(obj["op"], tuple(subset_from_json(x) for x in obj["args"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ElementSyntaxError):
            raise
        raise ElementSyntaxError(f"malformed subset {obj!r}: {exc}") from None
    raise ElementSyntaxError(f"malformed subset {obj!r}")

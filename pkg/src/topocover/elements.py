"""Elements: the finite constructor terms that name basic opens.

An element is a natural number, an atom (a bare identifier) or a tuple of
elements.  All three are immutable and hashable, and share one total order:
naturals before atoms before tuples; within a kind, numeric order,
lexicographic order and length-then-pointwise order respectively.

The canonical text form is decimal digits for naturals, the identifier for
atoms, and ``(e1,e2,...)`` for tuples, with ``()`` for the empty tuple.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Union

from .errors import ElementSyntaxError, NatOverflow

NAT_MAX = 2**63 - 1
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@functools.total_ordering
class _Ordered:
    __slots__ = ()

    def __lt__(self, other):
        if not isinstance(other, _Ordered):
            return NotImplemented
        return sort_key(self) < sort_key(other)


@dataclass(frozen=True, eq=True, order=False)
class Nat(_Ordered):
    value: int

    def __post_init__(self):
        v = self.value
        if isinstance(v, bool) or not isinstance(v, int):
            raise TypeError(f"Nat value must be an int, got {v!r}")
        if v < 0:
            raise ValueError(f"Nat value must be non-negative, got {v}")
        if v > NAT_MAX:
            raise NatOverflow(f"{v} exceeds the natural-number cap {NAT_MAX}")

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True, eq=True, order=False)
class Atom(_Ordered):
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not _IDENT.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=True, order=False)
class Tuple(_Ordered):
    items: tuple

    def __post_init__(self):
        items = tuple(self.items)
        for it in items:
            if not isinstance(it, (Nat, Atom, Tuple)):
                raise TypeError(f"tuple item is not an element: {it!r}")
        object.__setattr__(self, "items", items)

    def __str__(self):
        return encode(self)


Element = Union[Nat, Atom, Tuple]


def sort_key(e: Element):
    if isinstance(e, Nat):
        return (0, e.value)
    if isinstance(e, Atom):
        return (1, e.name)
    return (2, len(e.items), tuple(sort_key(x) for x in e.items))


def compare(e1: Element, e2: Element) -> int:
    """Three-way comparison: -1, 0 or 1 for LT, EQ, GT."""
    k1, k2 = sort_key(e1), sort_key(e2)
    return (k1 > k2) - (k1 < k2)


def canonical(elements) -> tuple:
    """Sorted, duplicate-free tuple of elements."""
    return tuple(sorted(set(elements), key=sort_key))


def nat(value: int) -> Nat:
    return Nat(value)


def tup(*items) -> Tuple:
    """Build a tuple, promoting ints to Nat and identifier strings to Atom."""
    return Tuple(tuple(lift(x) for x in items))


def lift(x) -> Element:
    if isinstance(x, (Nat, Atom, Tuple)):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not elements")
    if isinstance(x, int):
        return Nat(x)
    if isinstance(x, str):
        return Atom(x)
    if isinstance(x, tuple):
        return tup(*x)
    raise TypeError(f"cannot convert {x!r} to an element")


def checked_add(a: int, b: int) -> int:
    r = a + b
    if r > NAT_MAX:
        raise NatOverflow(f"{a} + {b} overflows")
    return r


def checked_mul(a: int, b: int) -> int:
    r = a * b
    if r > NAT_MAX:
        raise NatOverflow(f"{a} * {b} overflows")
    return r


def encode(e: Element) -> str:
    if isinstance(e, Nat):
        return str(e.value)
    if isinstance(e, Atom):
        return e.name
    return "(" + ",".join(encode(x) for x in e.items) + ")"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([(),]))")


def decode(text: str) -> Element:
    """Parse the canonical text form; whitespace between tokens is tolerated."""
    if not isinstance(text, str):
        raise ElementSyntaxError(f"element encoding must be a string, got {text!r}")
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ElementSyntaxError(f"unexpected character at offset {pos} in {text!r}")
        tokens.append((m.group(1), m.group(2), m.group(3), m.start(m.lastindex)))
        pos = m.end()
    if not tokens:
        raise ElementSyntaxError("empty element encoding")

    i = 0

    def parse():
        nonlocal i
        if i >= len(tokens):
            raise ElementSyntaxError(f"unexpected end of {text!r}")
        digits, ident, punct, at = tokens[i]
        i += 1
        if digits is not None:
            if len(digits) > 1 and digits[0] == "0":
                raise ElementSyntaxError(f"leading zero in {digits!r} at offset {at}")
            try:
                return Nat(int(digits))
            except NatOverflow as exc:
                raise ElementSyntaxError(str(exc)) from None
        if ident is not None:
            return Atom(ident)
        if punct != "(":
            raise ElementSyntaxError(f"unexpected {punct!r} at offset {at}")
        items = []
        if i < len(tokens) and tokens[i][2] == ")":
            i += 1
            return Tuple(())
        while True:
            items.append(parse())
            if i >= len(tokens):
                raise ElementSyntaxError(f"unclosed tuple in {text!r}")
            sep = tokens[i][2]
            i += 1
            if sep == ")":
                return Tuple(tuple(items))
            if sep != ",":
                raise ElementSyntaxError(f"expected ',' or ')' at offset {tokens[i - 1][3]}")

    e = parse()
    if i != len(tokens):
        raise ElementSyntaxError(f"trailing input at offset {tokens[i][3]} in {text!r}")
    return e

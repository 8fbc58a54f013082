"""Canonical hereditarily finite sets over a finite atom universe.

A value is either an :class:`Atom` (an opaque urelement taken from an input
structure) or an :class:`HfSet`, an immutable finite set of values.  All set
construction funnels through a global interning table, so two values are
extensionally equal exactly when they are the same Python object.  Equality
is therefore an identity check, structure is shared aggressively, and values
are safe to pass between threads once built (``dict.setdefault`` on the
interning table is the single synchronization point: concurrent interning of
equal values yields the identical canonical object).

Canonical form: members are stored deduplicated and sorted by an internal
total order (atoms by universe position, then sets compared member-wise).
That order exists only inside this module; none of the exported operations
reveal it, which is what keeps programs built on these values order-blind.

Von Neumann ordinals serve as the natural numbers: ``ordinal(n)`` is the set
``{0, 1, ..., n-1}``.  Ordinals 0 and 1 double as the truth values.  The
convention for every operation applied off its natural domain (for example
a member query on an atom) is to return ordinal 0.
"""

from __future__ import annotations

import itertools
from functools import cmp_to_key
from typing import Iterable, Iterator, Optional, Union

__all__ = [
    "Atom",
    "HfSet",
    "HfValue",
    "EMPTY",
    "FALSE",
    "TRUE",
    "is_atom",
    "is_set",
    "make_set",
    "pair",
    "ordered_pair",
    "union_all",
    "the_unique",
    "card",
    "ordinal",
    "ordinal_value",
    "add_via_card",
    "mul_via_card",
    "transitive_closure",
]

_atom_serial = itertools.count()


class Atom:
    """An urelement from an input universe.

    Atoms are never sets: membership queries on them are false and their
    member tuple is empty.  Two atoms are equal only if they are the same
    object, so distinct universes never collide.  ``index`` is the position
    in the owning universe's listing; it orders canonical forms internally
    and is not observable through any exported operation.
    """

    __slots__ = ("name", "index", "_serial")

    def __init__(self, name: str, index: int):
        self.name = str(name)
        self.index = int(index)
        self._serial = next(_atom_serial)

    @property
    def members(self) -> tuple:
        return ()

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


class HfSet:
    """A canonical, interned, immutable hereditarily finite set.

    Do not instantiate directly; use :func:`make_set` (or the derived
    constructors below), which dedupe, sort and intern.  Because of
    interning, ``a == b`` is simply ``a is b``.
    """

    __slots__ = ("members", "_member_set", "_hash")

    def __init__(self, members: tuple):
        self.members = members
        self._member_set = frozenset(members)
        self._hash = hash(self._member_set) ^ 0x9E3779B9

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator["HfValue"]:
        return iter(self.members)

    def __contains__(self, value: "HfValue") -> bool:
        return value in self._member_set

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        n = ordinal_value(self)
        if n is not None:
            return f"ord({n})"
        inner = ", ".join(
            m.name if isinstance(m, Atom) else repr(m) for m in self.members
        )
        return "{" + inner + "}"


HfValue = Union[Atom, HfSet]

_INTERN: dict = {}


def _compare(x: HfValue, y: HfValue) -> int:
    """Internal total order: atoms (by universe position) before sets,
    sets lexicographically by their canonical member tuples."""
    if x is y:
        return 0
    x_atom = isinstance(x, Atom)
    y_atom = isinstance(y, Atom)
    if x_atom and y_atom:
        kx = (x.index, x._serial)
        ky = (y.index, y._serial)
        return -1 if kx < ky else 1
    if x_atom != y_atom:
        return -1 if x_atom else 1
    for u, v in zip(x.members, y.members):
        c = _compare(u, v)
        if c:
            return c
    return len(x.members) - len(y.members)


_sort_key = cmp_to_key(_compare)


def is_atom(value: HfValue) -> bool:
    return isinstance(value, Atom)


def is_set(value: HfValue) -> bool:
    return isinstance(value, HfSet)


def make_set(elems: Iterable[HfValue]) -> HfSet:
    """Build the canonical set of the given values (duplicates collapse)."""
    members = sorted(dict.fromkeys(elems), key=_sort_key)
    key = tuple(members)
    found = _INTERN.get(key)
    if found is None:
        # setdefault keeps interning race-free under concurrent callers
        found = _INTERN.setdefault(key, HfSet(key))
    return found


def _intern_sorted(members: tuple) -> HfSet:
    found = _INTERN.get(members)
    if found is None:
        found = _INTERN.setdefault(members, HfSet(members))
    return found


EMPTY = make_set(())

_ORDINALS: list = [EMPTY]


def ordinal(n: int) -> HfSet:
    """The von Neumann ordinal ``{0, 1, ..., n-1}``."""
    if n < 0:
        raise ValueError("ordinals are nonnegative")
    while len(_ORDINALS) <= n:
        prev = _ORDINALS[-1]
        # prev exceeds all its members in the canonical order, so the
        # extended member tuple is already sorted
        _ORDINALS.append(_intern_sorted(prev.members + (prev,)))
    return _ORDINALS[n]


FALSE = ordinal(0)
TRUE = ordinal(1)


def ordinal_value(value: HfValue) -> Optional[int]:
    """Decode a von Neumann ordinal to an int, or None for anything else."""
    if not isinstance(value, HfSet):
        return None
    n = len(value.members)
    return n if value is ordinal(n) else None


def pair(x: HfValue, y: HfValue) -> HfSet:
    """The unordered pair ``{x, y}`` (a singleton when x = y)."""
    return make_set((x, y))


def ordered_pair(x: HfValue, y: HfValue) -> HfSet:
    """The coded ordered pair ``{{x}, {x, y}}``."""
    return make_set((make_set((x,)), make_set((x, y))))


def union_all(x: HfValue) -> HfSet:
    """Union of all set members of ``x``; atoms contribute nothing and
    the union of an atom is the empty set."""
    if isinstance(x, Atom):
        return EMPTY
    acc: list = []
    for m in x.members:
        if isinstance(m, HfSet):
            acc.extend(m.members)
    return make_set(acc)


def the_unique(x: HfValue) -> HfValue:
    """The sole member of a singleton set, ordinal 0 otherwise."""
    if isinstance(x, HfSet) and len(x.members) == 1:
        return x.members[0]
    return EMPTY


def card(x: HfValue) -> HfSet:
    """Cardinality as a von Neumann ordinal; atoms count 0."""
    if isinstance(x, Atom):
        return EMPTY
    return ordinal(len(x.members))


def add_via_card(a: HfValue, b: HfValue) -> HfSet:
    """Ordinal addition as the cardinality of ``a`` joined with a tagged
    disjoint copy ``{<0, x> : x in b}``."""
    tagged = [ordered_pair(EMPTY, x) for x in b.members] if isinstance(b, HfSet) else []
    base = a.members if isinstance(a, HfSet) else ()
    return card(make_set(tuple(base) + tuple(tagged)))


def mul_via_card(a: HfValue, b: HfValue) -> HfSet:
    """Ordinal multiplication as the cardinality of the coded cartesian
    product ``{<x, y> : x in a, y in b}``."""
    if not isinstance(a, HfSet) or not isinstance(b, HfSet):
        return EMPTY
    prod = [ordered_pair(x, y) for y in b.members for x in a.members]
    return card(make_set(prod))


def transitive_closure(value: HfValue) -> frozenset:
    """``{value}`` together with members, members of members, and so on."""
    seen: set = set()
    stack = [value]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        if isinstance(v, HfSet):
            stack.extend(v.members)
    return frozenset(seen)

"""
Pregroup types and cup-only reduction.

A simple type is a basic type decorated with an adjoint order ``z``:
``z < 0`` counts left adjoints, ``z > 0`` right adjoints.  Reduction links
adjacent pairs ``p . p^r -> 1`` and ``p^l . p -> 1``, i.e. any adjacent pair
with equal base whose right member has ``z`` one larger than the left one.

>>> g = Grammar(("n", "s", "o"), target="s")
>>> types = [g.parse_type(t) for t in ("n", "n", "n^r o", "o^r n^r s")]
>>> link = reduce(types, g.target)
>>> sorted(link.cups), link.survivors
([(0, 5), (1, 2), (3, 4)], (6,))
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GrammarError(ValueError):
    """Raised for malformed type expressions or unknown basic types."""


@dataclass(frozen=True, order=True)
class SimpleType:
    base: str
    z: int = 0

    @property
    def l(self) -> "SimpleType":
        return SimpleType(self.base, self.z - 1)

    @property
    def r(self) -> "SimpleType":
        return SimpleType(self.base, self.z + 1)

    def __str__(self):
        if self.z == 0:
            return self.base
        return self.base + "^" + ("r" * self.z if self.z > 0 else "l" * -self.z)


def adjoint_left(t: SimpleType) -> SimpleType:
    return t.l


def adjoint_right(t: SimpleType) -> SimpleType:
    return t.r


@dataclass(frozen=True)
class PregroupType:
    """Ordered product of simple types; the empty product is the unit."""

    simples: tuple[SimpleType, ...] = ()

    def __len__(self):
        return len(self.simples)

    def __iter__(self):
        return iter(self.simples)

    def __getitem__(self, i):
        return self.simples[i]

    def __matmul__(self, other: "PregroupType") -> "PregroupType":
        return PregroupType(self.simples + other.simples)

    def __str__(self):
        return " ".join(str(t) for t in self.simples)

    @property
    def is_unit(self) -> bool:
        return not self.simples


_SIMPLE_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(l+|r+))?$")


def parse_simple(token: str, basic: Iterable[str] | None = None) -> SimpleType:
    m = _SIMPLE_RE.match(token)
    if m is None:
        raise GrammarError(f"malformed simple type {token!r}")
    base, suffix = m.group(1), m.group(2)
    if basic is not None and base not in basic:
        raise GrammarError(f"unknown basic type {base!r}")
    z = 0
    if suffix:
        z = len(suffix) if suffix[0] == "r" else -len(suffix)
    return SimpleType(base, z)


def parse_type(text: str, basic: Iterable[str] | None = None) -> PregroupType:
    """
    Parse a whitespace separated type expression such as ``"o^r n^r s"``.

    Parentheses are accepted and ignored, so ``"(n^r o)"`` is fine.  With
    ``basic`` given, unknown base names raise :class:`GrammarError`.
    """
    basic = None if basic is None else frozenset(basic)
    tokens = text.replace("(", " ").replace(")", " ").split()
    return PregroupType(tuple(parse_simple(tok, basic) for tok in tokens))


def format_type(t: PregroupType) -> str:
    return str(t)


@dataclass(frozen=True)
class Grammar:
    """
    Basic types, the sentence target and an alias map.

    Aliases (``{"o": "n"}``) identify basic types.  :func:`reduce` compares
    base names literally; apply :meth:`canonical_type` first to reduce modulo
    the aliases.
    """

    basic_types: tuple[str, ...]
    target: str = "s"
    aliases: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "basic_types", tuple(self.basic_types))
        names = self.basic_types
        if any(not b for b in names) or len(set(names)) != len(names):
            raise GrammarError("basic type names must be nonempty and unique")
        if self.target not in names:
            raise GrammarError(f"target {self.target!r} is not a basic type")
        for k, v in self.aliases.items():
            if k not in names or v not in names:
                raise GrammarError(f"bad alias {k!r} -> {v!r}")

    def parse_type(self, text: str) -> PregroupType:
        return parse_type(text, self.basic_types)

    def canonical(self, base: str) -> str:
        seen = set()
        while base in self.aliases and base not in seen:
            seen.add(base)
            base = self.aliases[base]
        return base

    def canonical_type(self, t: PregroupType) -> PregroupType:
        """Rename aliased bases, e.g. ``o^r n^r s`` to ``n^r n^r s`` under ``o -> n``."""
        return PregroupType(tuple(SimpleType(self.canonical(s.base), s.z) for s in t))


@dataclass(frozen=True)
class ReductionLinkage:
    """
    Result of :func:`reduce` over the flattened simple types of a sentence.

    ``cups`` holds index pairs ``(i, j)`` with ``i < j``; ``survivors`` the
    unlinked indices in order.
    """

    cups: tuple[tuple[int, int], ...]
    survivors: tuple[int, ...]
    flat: tuple[SimpleType, ...]
    target: str

    @property
    def grammatical(self) -> bool:
        return (len(self.survivors) == 1
                and self.flat[self.survivors[0]] == SimpleType(self.target, 0))

    def to_dict(self) -> dict:
        return {
            "grammatical": self.grammatical,
            "cups": [list(c) for c in sorted(self.cups)],
            "survivors": list(self.survivors),
            "types": [str(t) for t in self.flat],
        }


def reduces(left: SimpleType, right: SimpleType) -> bool:
    return left.base == right.base and right.z == left.z + 1


def flatten(types: Sequence[PregroupType]) -> tuple[SimpleType, ...]:
    return tuple(t for ty in types for t in ty)


def reduce(types: Sequence[PregroupType], target: str = "s") -> ReductionLinkage:
    """
    Link reducible adjacent pairs, always taking the leftmost one first.

    Ungrammatical input is not an error: check ``.grammatical`` on the
    returned linkage, which then carries the partial cups.
    """
    if not types:
        raise GrammarError("need at least one word type")
    flat = flatten(types)
    alive = list(range(len(flat)))
    cups = []
    k = 0
    while k < len(alive) - 1:
        i, j = alive[k], alive[k + 1]
        if reduces(flat[i], flat[j]):
            cups.append((i, j))
            del alive[k:k + 2]
            k = max(k - 1, 0)
        else:
            k += 1
    return ReductionLinkage(tuple(cups), tuple(alive), flat, target)


def is_grammatical(types: Sequence[PregroupType], target: str = "s") -> bool:
    return reduce(types, target).grammatical


def is_planar(cups: Iterable[tuple[int, int]]) -> bool:
    cups = list(cups)
    for i, j in cups:
        for k, l in cups:
            if i < k < j < l:
                return False
    return True

"""Immutable AST node base with a cached structural hash."""

from __future__ import annotations

from dataclasses import dataclass


class Node:
    """Base for frozen slotted AST nodes.

    Subclasses are declared through :func:`node`. The hash is computed once at
    construction from the field values, so hashing a deep term is O(1) and
    equality can reject most mismatches without recursing.
    """

    __slots__ = ("_h",)

    def __post_init__(self) -> None:
        values = tuple(getattr(self, f) for f in self.__match_args__)
        object.__setattr__(self, "_h", hash((type(self).__name__,) + values))

    def __hash__(self) -> int:
        return self._h

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other):
            return NotImplemented if not isinstance(other, Node) else False
        if self._h != other._h:
            return False
        return all(getattr(self, f) == getattr(other, f) for f in self.__match_args__)

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def children(self) -> tuple:
        """Direct child nodes, in field order."""
        return tuple(getattr(self, f) for f in self.__match_args__ if isinstance(getattr(self, f), Node))


def node(cls):
    """Turn a class body into a frozen slotted node dataclass."""
    return dataclass(frozen=True, slots=True, eq=False)(cls)


def fresh(base: str, avoid) -> str:
    """Return ``base`` decorated with primes until it is not in ``avoid``."""
    name = base
    while name in avoid:
        name += "'"
    return name

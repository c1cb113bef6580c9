"""Session types, contexts and judgments."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping

from ._lex import Cursor, tokenize
from ._node import Node, node

Name = str


class SessionType(Node):
    __slots__ = ()

    def __str__(self) -> str:
        return type_text(self)


@node
class One(SessionType):
    pass


@node
class Tensor(SessionType):
    left: SessionType
    right: SessionType


@node
class Lolli(SessionType):
    left: SessionType
    right: SessionType


@node
class Plus(SessionType):
    left: SessionType
    right: SessionType


@node
class With(SessionType):
    left: SessionType
    right: SessionType


@node
class Bang(SessionType):
    body: SessionType


ONE = One()

_BINARY = {Tensor: "*", Lolli: "-o", Plus: "(+)", With: "&"}
_BY_SYMBOL = {v: k for k, v in _BINARY.items()}


@lru_cache(maxsize=1 << 14)
def type_depth(a: SessionType) -> int:
    match a:
        case One():
            return 0
        case Bang(b):
            return 1 + type_depth(b)
        case _:
            return max(type_depth(a.left), type_depth(a.right))


def _atom_text(a: SessionType) -> str:
    return f"({type_text(a)})" if type(a) in _BINARY else type_text(a)


@lru_cache(maxsize=1 << 14)
def type_text(a: SessionType) -> str:
    match a:
        case One():
            return "1"
        case Bang(b):
            return "!" + _atom_text(b)
        case _:
            op = _BINARY[type(a)]
            # right-associative: only a binary left operand needs parentheses
            return f"{_atom_text(a.left)} {op} {type_text(a.right)}"


TYPE_TOKENS = [
    ("OP", r"-o|\(\+\)|[*&]"),
    ("ONE", r"1"),
    ("BANG", r"!"),
    ("LP", r"\("),
    ("RP", r"\)"),
]


def parse_type(text: str) -> SessionType:
    cur = Cursor(tokenize(text, TYPE_TOKENS))
    a = parse_type_at(cur)
    cur.expect_end()
    return a


def parse_type_at(cur: Cursor) -> SessionType:
    """Parse a type from a cursor whose tokens include the type token kinds."""
    left = _parse_type_atom(cur)
    if cur.peek().kind == "OP":
        op = cur.next().text
        return _BY_SYMBOL[op](left, parse_type_at(cur))
    return left


def _parse_type_atom(cur: Cursor) -> SessionType:
    tok = cur.peek()
    if tok.kind == "ONE":
        cur.next()
        return ONE
    if tok.kind == "BANG":
        cur.next()
        return Bang(_parse_type_atom(cur))
    if tok.kind == "LP":
        cur.next()
        a = parse_type_at(cur)
        if cur.peek().kind != "RP":
            raise cur.error("expected ')'")
        cur.next()
        return a
    raise cur.error("expected a type")


@dataclass(frozen=True)
class Context(Mapping):
    """Immutable finite map from names to types; equality ignores order."""

    bindings: tuple = ()
    _map: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        items = tuple(sorted(dict(self.bindings).items()))
        object.__setattr__(self, "bindings", items)
        object.__setattr__(self, "_map", dict(items))

    @staticmethod
    def of(mapping: Mapping[Name, SessionType] | None = None, **kw) -> "Context":
        d = dict(mapping or {})
        d.update(kw)
        return Context(tuple(d.items()))

    def __getitem__(self, k: Name) -> SessionType:
        return self._map[k]

    def __iter__(self) -> Iterator[Name]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        return hash(self.bindings)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Context):
            return self.bindings == other.bindings
        if isinstance(other, Mapping):
            return self._map == dict(other)
        return NotImplemented

    def without(self, *names: Name) -> "Context":
        return Context(tuple((k, v) for k, v in self.bindings if k not in names))

    def extend(self, mapping: Mapping[Name, SessionType]) -> "Context":
        d = dict(self._map)
        d.update(mapping)
        return Context(tuple(d.items()))

    def text(self) -> str:
        return "{" + ", ".join(f"{k}: {type_text(v)}" for k, v in self.bindings) + "}"


EMPTY = Context()


@dataclass(frozen=True)
class Judgment:
    """``aux ; mux ; lin |- subject : offered``."""

    aux: Context
    mux: Context
    lin: Context
    subject: Name
    offered: SessionType

    def text(self) -> str:
        return (
            f"G: {self.aux.text()} ; D: {self.mux.text()} ; T: {self.lin.text()} "
            f"|- {self.subject} : {type_text(self.offered)}"
        )

    def __str__(self) -> str:
        return self.text()


def judgment_depth(j: Judgment) -> int:
    depths = [type_depth(j.offered)]
    for ctx in (j.aux, j.mux, j.lin):
        depths.extend(type_depth(a) for a in ctx.values())
    return max(depths)

"""Box depth, virtual occurrences, duplicability factor and weights of proof terms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import process as P
from .proofterm import (
    BangLBang,
    BangLSharp,
    BangR,
    Cut,
    CutBang,
    CutSharp,
    FlatBang,
    FlatSharp,
    LolliL,
    LolliR,
    OneL,
    OneR,
    PlusL,
    ProofTerm,
    TensorL,
    TensorR,
    WithR,
    extract,
    judgment_of,
)

Name = str


@lru_cache(maxsize=1 << 16)
def bde_term(d: ProofTerm) -> int:
    match d:
        case BangR(_, _, _, body):
            return 1 + bde_term(body)
        case CutBang(_, _, left, right) | CutSharp(_, _, left, right):
            return max(bde_term(left) + 1, bde_term(right))
    return max((bde_term(c) for c in d.children()), default=0)


@lru_cache(maxsize=1 << 17)
def foc(w: Name, d: ProofTerm) -> int:
    """Virtual number of occurrences of the exponential channel ``w`` in ``d``.

    A spawn on ``w`` counts once plus whatever its continuation does, binders
    shadow ``w``, and the two branches of a case count as one occurrence.
    """
    match d:
        case OneR():
            return 0
        case BangR():
            return 0
        case FlatSharp(x, y, body) | FlatBang(x, y, body):
            return (1 if x == w else 0) + (0 if y == w else foc(w, body))
        case BangLSharp(x, body) | BangLBang(x, body):
            return 0 if x == w else foc(w, body)
        case TensorL(_, y, body) | LolliR(_, y, body):
            return 0 if y == w else foc(w, body)
        case TensorR(_, y, left, right) | LolliL(_, y, left, right):
            return (0 if y == w else foc(w, left)) + foc(w, right)
        case PlusL(_, left, right) | WithR(_, left, right):
            return max(foc(w, left), foc(w, right))
        case Cut(x, left, right):
            return 0 if x == w else foc(w, left) + foc(w, right)
        case CutBang(x, y, left, right) | CutSharp(x, y, left, right):
            in_left = 0 if y == w else foc(w, left)
            in_right = 0 if x == w else foc(w, right)
            return foc(x, right) * in_left + in_right
    (body,) = d.children()
    return foc(w, body)


@lru_cache(maxsize=1 << 16)
def dupf(d: ProofTerm) -> int:
    match d:
        case BangLSharp(x, body) | BangLBang(x, body):
            return max(dupf(body), foc(x, body))
    return max((dupf(c) for c in d.children()), default=0)


@lru_cache(maxsize=1 << 17)
def weip(n: int, d: ProofTerm) -> int:
    match d:
        case OneR():
            return 0
        case OneL(_, body) | BangLSharp(_, body) | BangLBang(_, body):
            return weip(n, body)
        case BangR(_, _, _, body):
            return n * (weip(n, body) + 1)
        case Cut(_, left, right):
            return weip(n, left) + weip(n, right)
        case CutBang(x, _, left, right) | CutSharp(x, _, left, right):
            return foc(x, right) * weip(n, left) + weip(n, right)
        case TensorR(_, _, left, right) | LolliL(_, _, left, right) | PlusL(_, left, right) | WithR(_, left, right):
            return 1 + weip(n, left) + weip(n, right)
    (body,) = d.children()
    return 1 + weip(n, body)


def wei(d: ProofTerm) -> int:
    return weip(dupf(d), d)


def size_term(d: ProofTerm) -> int:
    return P.size(extract(d))


@dataclass(frozen=True)
class WeightReport:
    box_depth: int
    dup_factor: int
    weight: int
    term_size: int
    per_channel_foc: dict


def report(d: ProofTerm) -> WeightReport:
    j = judgment_of(d)
    names = sorted(set(j.aux) | set(j.mux))
    return WeightReport(
        box_depth=bde_term(d),
        dup_factor=dupf(d),
        weight=wei(d),
        term_size=size_term(d),
        per_channel_foc={x: foc(x, d) for x in names},
    )


def bound_polynomial(bd: int, s: int) -> int:
    """``q + s*q`` with ``q = s**(bd+2)``: the trace-length and size bound for box depth ``bd``."""
    q = s ** (bd + 2)
    return q + s * q

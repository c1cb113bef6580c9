"""Computational, shift and equivalence rewriting of proof terms, and subject reduction."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .errors import NotTypable, RedexNotFound, SearchExhausted, TypingError
from .metrics import dupf, size_term, wei
from .process import prenex, size
from .proofterm import (
    ACTORS,
    _SPEC,
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
    PlusR1,
    PlusR2,
    ProofTerm,
    TensorL,
    TensorR,
    WithL1,
    WithL2,
    WithR,
    extract,
    get_at,
    judgment_of,
    lift,
    rebuild,
    rename_term,
    term_free_names,
    term_names,
    term_size_nodes,
)
from ._node import fresh
from .reducer import Trace, TraceStep, apply_redex, redexes

Name = str

COMPUTATIONAL = "Computational"
SHIFT = "Shift"
EQUIVALENCE = "Equivalence"

STRUCTURAL = "structural"
BISIMILARITY = "bisimilarity"
COMMUTING = "commuting"

FORWARD = "→"
BACKWARD = "←"
SYMMETRIC = "↔"


@dataclass(frozen=True)
class RewriteStep:
    kind: str
    rule_name: str
    before: ProofTerm
    after: ProofTerm
    position: tuple
    direction: str = FORWARD
    block: str | None = None
    guarded: bool = False


@dataclass(frozen=True)
class Rule:
    name: str
    kind: str
    direction: str
    block: str | None
    apply: Callable[[ProofTerm, set], ProofTerm | None]


@dataclass(frozen=True)
class SRResult:
    target: ProofTerm
    script: list
    start: ProofTerm


def fn(d: ProofTerm) -> frozenset:
    return term_free_names(d)


# ---------------------------------------------------------------- computational rules


def _pick(preferred: list[Name], bad: set, avoid: set) -> Name:
    for n in preferred:
        if n not in bad:
            return n
    return fresh(preferred[0], avoid | bad)


def _cut_tensor(d, avoid):
    match d:
        case Cut(x, TensorR(x1, y, f, g), TensorL(x2, y2, h)) if x1 == x2 == x:
            bad = set(fn(g)) | (set(fn(h)) - {y2}) | (set(fn(f)) - {y}) | {x}
            n = _pick([y, y2], bad, avoid)
            return Cut(n, rename_term(f, {y: n}), Cut(x, g, rename_term(h, {y2: n})))
    return None


def _cut_lolli(d, avoid):
    match d:
        case Cut(x, LolliR(x1, y, body), LolliL(x2, y2, e, f)) if x1 == x2 == x:
            bad = (set(fn(e)) - {y2}) | (set(fn(body)) - {y}) | {x}
            n = _pick([y, y2], bad, avoid)
            return Cut(x, Cut(n, rename_term(e, {y2: n}), rename_term(body, {y: n})), f)
    return None


def _cut_with(which):
    def rule(d, avoid):
        match d:
            case Cut(x, WithR(x1, f, g), WithL1(x2, _, h)) if which == 1 and x1 == x2 == x:
                return Cut(x, f, h)
            case Cut(x, WithR(x1, f, g), WithL2(x2, _, h)) if which == 2 and x1 == x2 == x:
                return Cut(x, g, h)
        return None

    return rule


def _cut_plus(which):
    def rule(d, avoid):
        match d:
            case Cut(x, PlusR1(x1, _, f), PlusL(x2, g, h)) if which == 1 and x1 == x2 == x:
                return Cut(x, f, g)
            case Cut(x, PlusR2(x1, _, f), PlusL(x2, g, h)) if which == 2 and x1 == x2 == x:
                return Cut(x, f, h)
        return None

    return rule


def _spawn(d0: ProofTerm, y0: Name, y: Name, e: ProofTerm, avoid: set) -> tuple[Name, ProofTerm, ProofTerm]:
    """Common name for the spawned session, the renamed box copy and continuation."""
    bad = (set(fn(d0)) - {y0}) | (set(fn(e)) - {y})
    n = _pick([y, y0], bad, avoid)
    return n, rename_term(d0, {y0: n}), rename_term(e, {y: n})


def _cut_bang_flat(d, avoid):
    match d:
        case CutBang(x, y0, box, FlatBang(x1, y, e)) if x1 == x:
            n, copy, cont = _spawn(box, y0, y, e, avoid)
            return Cut(n, lift(copy), CutSharp(x, y0, box, lift(cont)))
    return None


def _cut_sharp_flat(d, avoid):
    match d:
        case CutSharp(x, y0, box, FlatSharp(x1, y, e)) if x1 == x:
            n, copy, cont = _spawn(box, y0, y, e, avoid)
            return Cut(n, lift(copy), CutSharp(x, y0, box, cont))
    return None


# ---------------------------------------------------------------- shift rules


def _shift(sharp: bool):
    def rule(d, avoid):
        match d:
            case Cut(x, BangR(x1, y, aux, box), BangLBang(x2, e, _)) if not sharp and x1 == x2 == x:
                body = CutBang(x, y, box, e)
            case Cut(x, BangR(x1, y, aux, box), BangLSharp(x2, e, _)) if sharp and x1 == x2 == x:
                body = CutSharp(x, y, box, e)
            case _:
                return None
        if y in fn(e):
            return None
        wrap = BangLSharp if sharp else BangLBang
        for a in reversed(aux):
            body = wrap(a, body)
        return body

    return rule


# ---------------------------------------------------------------- equivalence rows
#
# Each row is a pair of local rewrites. Free-name side conditions are the
# ones needed so that no subterm is moved into or out of a binder it uses.


def _mk_cut(k, x, w, left, right):
    return Cut(x, left, right) if k is Cut else k(x, w, left, right)


def _parts(node):
    """(cut class, channel, bound-or-None, left, right) for any cut node."""
    if isinstance(node, Cut):
        return Cut, node.chan, None, node.left, node.right
    return type(node), node.chan, node.bound, node.left, node.right


def _row_assoc_right(outer, inner):
    """``outer(x, D, inner(y, E, F)) -> inner(y, outer(x, D, E), F)`` when ``x`` lives in ``E``.

    Covers (cut/−/cut₁) with outer=inner=Cut, and (cut!/−/cut₁) with
    outer=CutBang, inner=Cut.
    """

    def fwd(d, avoid):
        if type(d) is not outer or type(d.right) is not inner:
            return None
        k, x, w, dd, r = _parts(d)
        _, y, _, e, f = _parts(r)
        if x == y or x in fn(f) or y in fn(dd) or x not in fn(e):
            return None
        return Cut(y, _mk_cut(outer, x, w, dd, e), f)

    def bwd(d, avoid):
        if type(d) is not inner or type(d.left) is not outer:
            return None
        _, y, _, l, f = _parts(d)
        k, x, w, dd, e = _parts(l)
        if x == y or x in fn(f) or y in fn(dd):
            return None
        return _mk_cut(outer, x, w, dd, Cut(y, e, f))

    return fwd, bwd


def _row_swap(outer, inner):
    """``outer(x, D, inner(y, E, F)) <-> inner(y, E, outer(x, D, F))``."""

    def fwd(d, avoid):
        if type(d) is not outer or type(d.right) is not inner:
            return None
        _, x, w, dd, r = _parts(d)
        _, y, v, e, f = _parts(r)
        if x == y or x in fn(e) or y in fn(dd):
            return None
        return _mk_cut(inner, y, v, e, _mk_cut(outer, x, w, dd, f))

    def bwd(d, avoid):
        if type(d) is not inner or type(d.right) is not outer:
            return None
        _, y, v, e, r = _parts(d)
        _, x, w, dd, f = _parts(r)
        if x == y or x in fn(e) or y in fn(dd):
            return None
        return _mk_cut(outer, x, w, dd, _mk_cut(inner, y, v, e, f))

    return fwd, bwd


def _row_left_exp(inner):
    """``Cut(x, inner(y, D, E), F) <-> inner(y, D, Cut(x, E, F))`` for an exponential ``inner``."""

    def fwd(d, avoid):
        if type(d) is not Cut or type(d.left) is not inner:
            return None
        x, l, f = d.chan, d.left, d.right
        _, y, v, dd, e = _parts(l)
        if x == y or y in fn(f) or x in fn(dd):
            return None
        return inner(y, v, dd, Cut(x, e, f))

    def bwd(d, avoid):
        if type(d) is not inner or type(d.right) is not Cut:
            return None
        _, y, v, dd, r = _parts(d)
        x, e, f = r.chan, r.left, r.right
        if x == y or y in fn(f) or x in fn(dd):
            return None
        return Cut(x, inner(y, v, dd, e), f)

    return fwd, bwd


def _cut_unit_fwd(d, avoid):
    match d:
        case Cut(x, OneR(x1), OneL(x2, body)) if x1 == x2 == x and x not in fn(body):
            return body
    return None


def _cut_unit_bwd(d, avoid):
    u = fresh("u", avoid | set(term_names(d)))
    return Cut(u, OneR(u), OneL(u, d))


def _dup_cut_fwd(d, avoid):
    match d:
        case CutSharp(x, w, box, Cut(y, e, f)) if x != y and y not in fn(box):
            return Cut(y, CutSharp(x, w, box, e), CutSharp(x, w, box, f))
    return None


def _dup_cut_bwd(d, avoid):
    match d:
        case Cut(y, CutSharp(x, w, box, e), CutSharp(x2, w2, box2, f)) if (
            (x, w, box) == (x2, w2, box2) and x != y and y not in fn(box)
        ):
            return CutSharp(x, w, box, Cut(y, e, f))
    return None


def _dup_sharp_fwd(d, avoid):
    match d:
        case CutSharp(x, w, box, CutSharp(y, v, e, f)) if x != y and y not in fn(box):
            return CutSharp(x, w, box, CutSharp(y, v, e, CutSharp(x, w, box, f)))
    return None


def _dup_sharp_bwd(d, avoid):
    match d:
        case CutSharp(x, w, box, CutSharp(y, v, e, CutSharp(x2, w2, box2, f))) if (
            (x, w, box) == (x2, w2, box2) and x != y and y not in fn(box)
        ):
            return CutSharp(x, w, box, CutSharp(y, v, e, f))
    return None


def _nest_bang_fwd(d, avoid):
    """``CutBang(x, D, CutBang(y, E, F)) -> CutBang(y, CutBang(x, D, E), F)``."""
    match d:
        case CutBang(x, w, box, CutBang(y, v, e, f)) if (
            x != y and x not in fn(f) and y not in fn(box) and v not in fn(box) and x != v
        ):
            return CutBang(y, v, CutBang(x, w, box, e), f)
    return None


def _nest_bang_bwd(d, avoid):
    match d:
        case CutBang(y, v, CutBang(x, w, box, e), f) if (
            x != y and x not in fn(f) and y not in fn(box) and v not in fn(box) and x != v
        ):
            return CutBang(x, w, box, CutBang(y, v, e, f))
    return None


def _garbage_fwd(d, avoid):
    match d:
        case CutSharp(x, _, _, e) if x not in fn(e):
            return e
    return None


_LEFT_RULES = {OneL: "1L", BangLBang: "!L!", BangLSharp: "!L#"}
_CUT_WORD = {Cut: "cut", CutBang: "cut!", CutSharp: "cut#"}


def _commute_right(k, lrule):
    """``k(x, D, L(y, E)) <-> L(y, k(x, D, E))``."""

    def fwd(d, avoid):
        if type(d) is not k or type(d.right) is not lrule:
            return None
        _, x, w, dd, r = _parts(d)
        y = r.chan
        if y == x or y in fn(dd) or (w is not None and y == w):
            return None
        return rebuild(r, body=_mk_cut(k, x, w, dd, r.body))

    def bwd(d, avoid):
        if type(d) is not lrule or type(d.body) is not k:
            return None
        y = d.chan
        _, x, w, dd, e = _parts(d.body)
        if y == x or y in fn(dd) or (w is not None and y == w):
            return None
        return _mk_cut(k, x, w, dd, rebuild(d, body=e))

    return fwd, bwd


def _commute_left(lrule):
    """``Cut(x, L(y, D), E) <-> L(y, Cut(x, D, E))``."""

    def fwd(d, avoid):
        if type(d) is not Cut or type(d.left) is not lrule:
            return None
        x, l, e = d.chan, d.left, d.right
        y = l.chan
        if y == x or y in fn(e):
            return None
        return rebuild(l, body=Cut(x, l.body, e))

    def bwd(d, avoid):
        if type(d) is not lrule or type(d.body) is not Cut:
            return None
        y = d.chan
        x, dd, e = d.body.chan, d.body.left, d.body.right
        if y == x or y in fn(e):
            return None
        return Cut(x, rebuild(d, body=dd), e)

    return fwd, bwd


def _build_rules() -> list[Rule]:
    rules = [
        Rule("(cut/⊗R/⊗L)", COMPUTATIONAL, FORWARD, None, _cut_tensor),
        Rule("(cut/⊸R/⊸L)", COMPUTATIONAL, FORWARD, None, _cut_lolli),
        Rule("(cut/&R/&L₁)", COMPUTATIONAL, FORWARD, None, _cut_with(1)),
        Rule("(cut/&R/&L₂)", COMPUTATIONAL, FORWARD, None, _cut_with(2)),
        Rule("(cut/⊕R₁/⊕L)", COMPUTATIONAL, FORWARD, None, _cut_plus(1)),
        Rule("(cut/⊕R₂/⊕L)", COMPUTATIONAL, FORWARD, None, _cut_plus(2)),
        Rule("(cut!/−/♭!)", COMPUTATIONAL, FORWARD, None, _cut_bang_flat),
        Rule("(cut#/−/♭#)", COMPUTATIONAL, FORWARD, None, _cut_sharp_flat),
        Rule("(cut/!R/!L!)", SHIFT, FORWARD, None, _shift(False)),
        Rule("(cut/!R/!L#)", SHIFT, FORWARD, None, _shift(True)),
    ]

    def pair(name, block, fb, symmetric=False):
        f, b = fb
        if symmetric:
            rules.append(Rule(name, EQUIVALENCE, SYMMETRIC, block, f))
        else:
            rules.append(Rule(name, EQUIVALENCE, FORWARD, block, f))
            if b is not None:
                rules.append(Rule(name, EQUIVALENCE, BACKWARD, block, b))

    pair("(cut/−/cut₁)", STRUCTURAL, _row_assoc_right(Cut, Cut))
    pair("(cut/−/cut₂)", STRUCTURAL, _row_swap(Cut, Cut), symmetric=True)
    pair("(cut/−/cut!)", STRUCTURAL, _row_swap(Cut, CutBang))
    pair("(cut/cut!/−)", STRUCTURAL, _row_left_exp(CutBang))
    pair("(cut/−/cut#)", STRUCTURAL, _row_swap(Cut, CutSharp))
    pair("(cut/cut#/−)", STRUCTURAL, _row_left_exp(CutSharp))
    pair("(cut/1R/1L)", STRUCTURAL, (_cut_unit_fwd, _cut_unit_bwd))

    pair("(cut#/−/cut)", BISIMILARITY, (_dup_cut_fwd, _dup_cut_bwd))
    pair("(cut#/−/cut#)", BISIMILARITY, (_dup_sharp_fwd, _dup_sharp_bwd))
    pair("(cut#/−/cut!)", BISIMILARITY, _row_swap(CutSharp, CutBang))
    pair("(cut!/−/cut₁)", BISIMILARITY, _row_assoc_right(CutBang, Cut))
    pair("(cut!/−/cut₂)", BISIMILARITY, _row_swap(CutBang, Cut))
    pair("(cut!/−/cut!)₁", BISIMILARITY, (_nest_bang_fwd, _nest_bang_bwd))
    pair("(cut!/−/cut!)₂", BISIMILARITY, _row_swap(CutBang, CutBang), symmetric=True)
    pair("(cut!/−/cut#)", BISIMILARITY, _row_swap(CutBang, CutSharp))
    pair("(cut#/−/cut#)₀", BISIMILARITY, _row_swap(CutSharp, CutSharp), symmetric=True)
    pair("(cut#/−/−₀)", BISIMILARITY, (_garbage_fwd, None))

    for k in (Cut, CutBang, CutSharp):
        for lrule, word in _LEFT_RULES.items():
            pair(f"({_CUT_WORD[k]}/−/{word})", COMMUTING, _commute_right(k, lrule))
    for lrule, word in _LEFT_RULES.items():
        pair(f"(cut/{word}/−)", COMMUTING, _commute_left(lrule))
    return rules


RULES: list[Rule] = _build_rules()
RULE_INDEX: dict[tuple[str, str], Rule] = {(r.name, r.direction): r for r in RULES}


def rule(name: str, direction: str = FORWARD) -> Rule:
    return RULE_INDEX[(name, direction)]


# ---------------------------------------------------------------- positions and context repair


def rewrite_positions(d: ProofTerm, path: tuple = (), guarded: bool = False):
    """(path, subterm, guarded) for every position outside boxes.

    Box bodies (the premise of !R and the left premise of exponential cuts) are
    skipped: their contexts are frozen by the box discipline. ``guarded`` marks
    positions below an action prefix, where the step has no process-level
    counterpart in internal reduction.
    """
    yield path, d, guarded
    kids = d.children()
    for i, c in enumerate(kids):
        if isinstance(d, BangR) or (isinstance(d, (CutBang, CutSharp)) and i == 0):
            continue
        yield from rewrite_positions(c, path + (i,), guarded or isinstance(d, ACTORS))


def _repair(old: ProofTerm, new: ProofTerm) -> ProofTerm:
    """Re-establish the rule flavour of ``new`` after a premise changed contexts."""
    match new:
        case BangLBang(x, body, ty) | BangLSharp(x, body, ty):
            jb = judgment_of(body)
            if isinstance(new, BangLBang) and x in jb.mux:
                new = BangLSharp(x, body, ty)
            home = jb.mux if isinstance(new, BangLSharp) else jb.aux
            if x not in home and ty is None:
                new = rebuild(new, ty=judgment_of(old).lin[x].body)
        case CutBang(x, y, left, right):
            if x in judgment_of(right).mux:
                new = CutSharp(x, y, left, right)
        case PlusL(_, left, right) | WithR(_, left, right):
            jl, jr = judgment_of(left), judgment_of(right)
            if set(jl.aux) & set(jr.mux) or set(jl.mux) & set(jr.aux):
                new = rebuild(new, left=lift(left), right=lift(right))
    return new


def plug(root: ProofTerm, path: tuple, new: ProofTerm) -> ProofTerm:
    """Replace the subterm at ``path`` and repair every ancestor."""
    if not path:
        return new
    ancestors = [root]
    for i in path[:-1]:
        ancestors.append(ancestors[-1].children()[i])
    cur = new
    for depth in reversed(range(len(path))):
        anc = ancestors[depth]
        field = _SPEC[type(anc)].kids[path[depth]]
        cur = _repair(anc, rebuild(anc, **{field: cur}))
    return cur


def _steps(d: ProofTerm, kinds: tuple) -> list[RewriteStep]:
    avoid = set(term_names(d))
    out = []
    for path, sub, guarded in rewrite_positions(d):
        for r in RULES:
            if r.kind not in kinds:
                continue
            new = r.apply(sub, avoid)
            if new is None:
                continue
            try:
                after = plug(d, path, new)
            except TypingError:
                continue
            out.append(RewriteStep(r.kind, r.name, d, after, path, r.direction, r.block, guarded))
    return out


def computational_steps(d: ProofTerm) -> list[RewriteStep]:
    return _steps(d, (COMPUTATIONAL,))


def shift_steps(d: ProofTerm) -> list[RewriteStep]:
    return _steps(d, (SHIFT,))


def equivalence_steps(d: ProofTerm) -> list[RewriteStep]:
    return _steps(d, (EQUIVALENCE,))


def all_steps(d: ProofTerm) -> list[RewriteStep]:
    return _steps(d, (COMPUTATIONAL, SHIFT, EQUIVALENCE))


# ---------------------------------------------------------------- subject reduction


def uniquify(d: ProofTerm) -> ProofTerm:
    """Alpha-rename binders so that no binder shadows another name of the term."""
    seen = set(term_free_names(d))

    def go(t: ProofTerm) -> ProofTerm:
        spec = _SPEC[type(t)]
        kwargs = {f: getattr(t, f) for f in t.__match_args__}
        kids = {k: getattr(t, k) for k in spec.kids}
        for b, scope in spec.binds.items():
            v = getattr(t, b)
            if v in seen:
                v2 = fresh(v, seen | set(term_names(t)))
                kwargs[b] = v2
                for k in scope:
                    kids[k] = rename_term(kids[k], {v: v2})
                v = v2
            seen.add(v)
        for k in spec.kids:
            kwargs[k] = go(kids[k])
        return type(t)(**kwargs)

    return go(d)


def actor_paths(d: ProofTerm, path: tuple = ()) -> list[tuple]:
    """Paths of the nodes that extract to the top-level components of ``prenex(extract(d))``."""
    match d:
        case Cut(_, left, right):
            return actor_paths(left, path + (0,)) + actor_paths(right, path + (1,))
        case CutBang(_, _, _, right) | CutSharp(_, _, _, right):
            return [path] + actor_paths(right, path + (1,))
        case OneL(_, body) | BangLBang(_, body) | BangLSharp(_, body):
            return actor_paths(body, path + (0,))
        case OneR():
            return []
    return [path]


def _acting_channel(node: ProofTerm) -> Name:
    for f in ("subject", "chan"):
        if hasattr(node, f):
            return getattr(node, f)
    raise TypeError(node)


class _Script:
    def __init__(self, term: ProofTerm, bound: int):
        self.term = term
        self.steps: list[RewriteStep] = []
        self.equivalences = 0
        self.bound = bound

    def apply(self, path: tuple, name: str, direction: str = FORWARD) -> ProofTerm:
        r = rule(name, direction)
        node = get_at(self.term, path)
        new = r.apply(node, set(term_names(self.term)))
        if new is None:
            raise SearchExhausted(f"rule {name} {direction} does not apply at {path}")
        try:
            after = plug(self.term, path, new)
        except TypingError as e:
            raise SearchExhausted(f"rule {name} {direction} at {path} broke typing: {e}") from None
        self.steps.append(RewriteStep(r.kind, r.name, self.term, after, path, r.direction, r.block))
        self.term = after
        if r.kind == EQUIVALENCE:
            self.equivalences += 1
            if self.equivalences > self.bound:
                raise SearchExhausted(f"more than {self.bound} equivalence steps")
        return after

    def at(self, path: tuple) -> ProofTerm:
        return get_at(self.term, path)


_LINEAR_COMPUTATIONAL = [
    "(cut/⊗R/⊗L)", "(cut/⊸R/⊸L)", "(cut/&R/&L₁)", "(cut/&R/&L₂)", "(cut/⊕R₁/⊕L)", "(cut/⊕R₂/⊕L)",
]


def _fire_linear(s: _Script, path: tuple, pa: tuple, pb: tuple) -> None:
    while True:
        node = s.at(path)
        if not isinstance(node, Cut):
            raise SearchExhausted(f"expected a linear cut at {path}")
        x, left, right = node.chan, node.left, node.right
        if pa:
            match left:
                case OneL() | BangLBang() | BangLSharp():
                    s.apply(path, f"(cut/{_LEFT_RULES[type(left)]}/−)")
                    path, pa = path + (0,), pa[1:]
                case Cut():
                    s.apply(path, "(cut/−/cut₁)", BACKWARD)
                    path, pa = path + (1,), pa[1:]
                case CutBang():
                    s.apply(path, "(cut/cut!/−)")
                    path, pa = path + (1,), pa[1:]
                case CutSharp():
                    s.apply(path, "(cut/cut#/−)")
                    path, pa = path + (1,), pa[1:]
                case _:
                    raise SearchExhausted(f"cannot push the cut at {path} into {type(left).__name__}")
            continue
        if pb:
            match right:
                case BangLBang(z, _) | BangLSharp(z, _) if z == x:
                    if not isinstance(left, BangR):
                        raise SearchExhausted("a !L on the cut channel needs a !R partner")
                    k = len(left.aux)
                    s.apply(path, "(cut/!R/!L#)" if isinstance(right, BangLSharp) else "(cut/!R/!L!)")
                    _fire_exp(s, path + (0,) * k, pb[1:])
                    return
                case OneL() | BangLBang() | BangLSharp():
                    s.apply(path, f"(cut/−/{_LEFT_RULES[type(right)]})")
                    path, pb = path + (0,), pb[1:]
                case Cut():
                    if pb[0] == 0:
                        s.apply(path, "(cut/−/cut₁)")
                        path, pb = path + (0,), pb[1:]
                    else:
                        s.apply(path, "(cut/−/cut₂)", SYMMETRIC)
                        path, pb = path + (1,), pb[1:]
                case CutBang():
                    s.apply(path, "(cut/−/cut!)")
                    path, pb = path + (1,), pb[1:]
                case CutSharp():
                    s.apply(path, "(cut/−/cut#)")
                    path, pb = path + (1,), pb[1:]
                case _:
                    raise SearchExhausted(f"cannot push the cut at {path} into {type(right).__name__}")
            continue
        for name in _LINEAR_COMPUTATIONAL:
            if rule(name).apply(node, set()) is not None:
                s.apply(path, name)
                return
        raise SearchExhausted(f"no computational rule matches at {path}")


def _rehoist_left_rule(s: _Script, path: tuple) -> None:
    node = s.at(path)
    s.apply(path, f"(cut#/−/{_LEFT_RULES[type(node)]})", BACKWARD)


def _fire_exp(s: _Script, path: tuple, pb: tuple) -> None:
    """Fire a spawn against the exponential cut at ``path``; leaves ``CutSharp(x, w, D, _)`` there."""
    node = s.at(path)
    if not isinstance(node, (CutBang, CutSharp)):
        raise SearchExhausted(f"expected an exponential cut at {path}")
    sharp = isinstance(node, CutSharp)
    word = "cut#" if sharp else "cut!"
    x, right = node.chan, node.right
    if not pb:
        s.apply(path, "(cut#/−/♭#)" if sharp else "(cut!/−/♭!)")
        s.apply(path, "(cut/−/cut#)")
        return
    match right:
        case OneL() | BangLBang() | BangLSharp():
            s.apply(path, f"({word}/−/{_LEFT_RULES[type(right)]})")
            _fire_exp(s, path + (0,), pb[1:])
            _rehoist_left_rule(s, path)
        case Cut():
            k = pb[0]
            if sharp:
                s.apply(path, "(cut#/−/cut)")
                _fire_exp(s, path + (k,), pb[1:])
                s.apply(path, "(cut#/−/cut)", BACKWARD)
            elif k == 0:
                s.apply(path, "(cut!/−/cut₁)")
                _fire_exp(s, path + (0,), pb[1:])
                s.apply(path, "(cut/cut#/−)")
            else:
                s.apply(path, "(cut!/−/cut₂)")
                _fire_exp(s, path + (1,), pb[1:])
                s.apply(path, "(cut/−/cut#)")
        case CutBang() | CutSharp():
            inner_sharp = isinstance(right, CutSharp)
            if sharp and inner_sharp and x in fn(right.left):
                s.apply(path, "(cut#/−/cut#)")
                _fire_exp(s, path + (1, 1), pb[1:])
                s.apply(path, "(cut#/−/cut#)", BACKWARD)
                return
            if sharp and inner_sharp:
                s.apply(path, "(cut#/−/cut#)₀", SYMMETRIC)
            elif sharp:
                s.apply(path, "(cut#/−/cut!)")
            elif inner_sharp:
                s.apply(path, "(cut!/−/cut#)")
            else:
                s.apply(path, "(cut!/−/cut!)₂", SYMMETRIC)
            _fire_exp(s, path + (1,), pb[1:])
            # the outer node is now inner(y, E, CutSharp(x, w, D, F)), perhaps re-flavoured
            if isinstance(s.at(path), CutSharp):
                s.apply(path, "(cut#/−/cut#)₀", SYMMETRIC)
            else:
                s.apply(path, "(cut!/−/cut#)")
        case _:
            raise SearchExhausted(f"cannot push the exponential cut at {path} into {type(right).__name__}")


def subject_reduce(d: ProofTerm, redex: tuple[int, int], bound: int | None = None) -> SRResult:
    """Mirror the internal reduction ``redex`` of ``extract(d)`` by a rewrite script."""
    try:
        judgment_of(d)
    except TypingError as e:
        raise NotTypable(str(e)) from None
    p = extract(d)
    soup = prenex(p)
    if tuple(redex) not in set(redexes(soup)):
        raise RedexNotFound(f"{redex} is not a redex of the extracted process")
    if bound is None:
        # process size ignores cut and 1L nodes, which the script still has to walk past
        bound = 4 * max(size_term(d), term_size_nodes(d)) ** 2
    start = uniquify(d)
    paths = actor_paths(start)
    pa_abs, pb_abs = paths[redex[0]], paths[redex[1]]
    common = 0
    while common < min(len(pa_abs), len(pb_abs)) and pa_abs[common] == pb_abs[common]:
        common += 1
    c = pa_abs[:common]
    binder = get_at(start, c)
    s = _Script(start, bound)
    if isinstance(binder, (CutBang, CutSharp)):
        server, client = (pa_abs, pb_abs) if len(pa_abs) == common else (pb_abs, pa_abs)
        if len(server) != common or client[common] != 1:
            raise RedexNotFound("redex does not pass through the exponential cut")
        flat = get_at(start, client)
        if not isinstance(flat, (FlatBang, FlatSharp)) or flat.chan != binder.chan:
            raise RedexNotFound("client of the exponential cut is not a spawn on its channel")
        _fire_exp(s, c, client[common + 1 :])
    elif isinstance(binder, Cut):
        a, b = (pa_abs, pb_abs) if pa_abs[common] == 0 else (pb_abs, pa_abs)
        for q in (a, b):
            if _acting_channel(get_at(start, q)) != binder.chan:
                raise RedexNotFound("redex channel is not bound by the enclosing cut")
        _fire_linear(s, c, a[common + 1 :], b[common + 1 :])
    else:
        raise RedexNotFound("redex is not bound by a cut")
    try:
        judgment_of(s.term)
    except TypingError as e:
        raise SearchExhausted(f"script ended in an ill-typed term: {e}") from None
    return SRResult(s.term, s.steps, start)


def computational_rule_of(script: list[RewriteStep]) -> str:
    return next(st.rule_name for st in script if st.kind == COMPUTATIONAL)


def run_weighted_trace(
    d: ProofTerm,
    strategy: str = "first",
    max_steps: int = 10_000,
    seed: int = 0,
) -> Trace:
    """Reduce the extracted process step by step, mirroring each step on the proof term."""
    try:
        judgment_of(d)
    except TypingError as e:
        raise NotTypable(str(e)) from None
    rng = random.Random(seed)
    p = extract(d)
    trace = Trace(initial=p, initial_size=size(p), initial_term=d, initial_wei=wei(d), initial_dupf=dupf(d))
    cur = d
    while True:
        p = extract(cur)
        rxs = redexes(prenex(p))
        if not rxs:
            trace.terminated = True
            break
        if len(trace.steps) >= max_steps:
            break
        rx = rxs[0] if strategy == "first" else rng.choice(rxs)
        res = subject_reduce(cur, rx)
        cur = res.target
        q = extract(cur)
        trace.steps.append(
            TraceStep(
                index=len(trace.steps) + 1,
                rule=computational_rule_of(res.script),
                size=size(q),
                process=q,
                term=cur,
                wei=wei(cur),
                dupf=dupf(cur),
                redex=rx,
            )
        )
    trace.final = extract(cur)
    return trace


def reference_reduct(d: ProofTerm, redex: tuple[int, int]):
    """The reducer's reduct of ``extract(d)`` at ``redex``."""
    return apply_redex(extract(d), redex)

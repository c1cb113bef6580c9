"""Proof terms for the typing rules: syntax, extraction, synthesis, checking and lifting."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from . import process as P
from ._lex import Cursor, tokenize
from ._node import Node, fresh, node
from .errors import (
    AuxiliaryNonlinear,
    ContextMismatch,
    DeclaredMismatch,
    MultiplexorRequired,
    NameClash,
    TypeMismatch,
)
from .sessiontypes import (
    EMPTY,
    ONE,
    TYPE_TOKENS,
    Bang,
    Context,
    Judgment,
    Lolli,
    One,
    Plus,
    SessionType,
    Tensor,
    With,
    parse_type_at,
    type_text,
)

Name = str


class ProofTerm(Node):
    __slots__ = ()

    def children(self) -> tuple:
        return tuple(getattr(self, f) for f in _SPEC[type(self)].kids)

    def __str__(self) -> str:
        return term_text(self)


@node
class OneL(ProofTerm):
    chan: Name
    body: ProofTerm


@node
class OneR(ProofTerm):
    subject: Name


@node
class TensorL(ProofTerm):
    chan: Name
    bound: Name
    body: ProofTerm


@node
class TensorR(ProofTerm):
    subject: Name
    payload: Name
    left: ProofTerm
    right: ProofTerm


@node
class LolliL(ProofTerm):
    chan: Name
    payload: Name
    left: ProofTerm
    right: ProofTerm


@node
class LolliR(ProofTerm):
    subject: Name
    bound: Name
    body: ProofTerm


@node
class PlusL(ProofTerm):
    chan: Name
    left: ProofTerm
    right: ProofTerm


@node
class PlusR1(ProofTerm):
    subject: Name
    other: SessionType
    body: ProofTerm


@node
class PlusR2(ProofTerm):
    subject: Name
    other: SessionType
    body: ProofTerm


@node
class WithL1(ProofTerm):
    chan: Name
    other: SessionType
    body: ProofTerm


@node
class WithL2(ProofTerm):
    chan: Name
    other: SessionType
    body: ProofTerm


@node
class WithR(ProofTerm):
    subject: Name
    left: ProofTerm
    right: ProofTerm


@node
class FlatSharp(ProofTerm):
    chan: Name
    bound: Name
    body: ProofTerm


@node
class FlatBang(ProofTerm):
    chan: Name
    bound: Name
    body: ProofTerm


@node
class BangLSharp(ProofTerm):
    """``ty`` optionally records the type under the bang when ``chan`` is unused in ``body``."""

    chan: Name
    body: ProofTerm
    ty: SessionType | None = None


@node
class BangLBang(ProofTerm):
    chan: Name
    body: ProofTerm
    ty: SessionType | None = None


@node
class BangR(ProofTerm):
    subject: Name
    bound: Name
    aux: tuple
    body: ProofTerm


@node
class Cut(ProofTerm):
    chan: Name
    left: ProofTerm
    right: ProofTerm


@node
class CutBang(ProofTerm):
    chan: Name
    bound: Name
    left: ProofTerm
    right: ProofTerm


@node
class CutSharp(ProofTerm):
    chan: Name
    bound: Name
    left: ProofTerm
    right: ProofTerm


@dataclass(frozen=True)
class _Spec:
    kids: tuple  # child fields, in order
    free: tuple  # name fields occurring free at this node
    binds: dict  # binder field -> child fields it scopes over


_SPEC = {
    OneL: _Spec(("body",), ("chan",), {}),
    OneR: _Spec((), ("subject",), {}),
    TensorL: _Spec(("body",), ("chan",), {"bound": ("body",)}),
    TensorR: _Spec(("left", "right"), ("subject",), {"payload": ("left",)}),
    LolliL: _Spec(("left", "right"), ("chan",), {"payload": ("left",)}),
    LolliR: _Spec(("body",), ("subject",), {"bound": ("body",)}),
    PlusL: _Spec(("left", "right"), ("chan",), {}),
    PlusR1: _Spec(("body",), ("subject",), {}),
    PlusR2: _Spec(("body",), ("subject",), {}),
    WithL1: _Spec(("body",), ("chan",), {}),
    WithL2: _Spec(("body",), ("chan",), {}),
    WithR: _Spec(("left", "right"), ("subject",), {}),
    FlatSharp: _Spec(("body",), ("chan",), {"bound": ("body",)}),
    FlatBang: _Spec(("body",), ("chan",), {"bound": ("body",)}),
    BangLSharp: _Spec(("body",), ("chan",), {}),
    BangLBang: _Spec(("body",), ("chan",), {}),
    BangR: _Spec(("body",), ("subject", "aux"), {"bound": ("body",)}),
    Cut: _Spec(("left", "right"), (), {"chan": ("left", "right")}),
    CutBang: _Spec(("left", "right"), (), {"bound": ("left",), "chan": ("right",)}),
    CutSharp: _Spec(("left", "right"), (), {"bound": ("left",), "chan": ("right",)}),
}

BANG_L = (BangLSharp, BangLBang)
FLATS = (FlatSharp, FlatBang)
EXP_CUTS = (CutBang, CutSharp)
CUTS = (Cut, CutBang, CutSharp)
# nodes whose extraction starts with an action prefix
ACTORS = (TensorL, TensorR, LolliL, LolliR, PlusL, PlusR1, PlusR2, WithL1, WithL2, WithR, FlatSharp, FlatBang, BangR)


def _field_names(d: ProofTerm, f: str) -> tuple:
    v = getattr(d, f)
    return v if isinstance(v, tuple) else (v,)


@lru_cache(maxsize=1 << 17)
def term_free_names(d: ProofTerm) -> frozenset:
    spec = _SPEC[type(d)]
    out = set()
    for f in spec.free:
        out.update(_field_names(d, f))
    bound_in = {k: set() for k in spec.kids}
    for b, kids in spec.binds.items():
        for k in kids:
            bound_in[k].add(getattr(d, b))
    for k in spec.kids:
        out |= term_free_names(getattr(d, k)) - bound_in[k]
    return frozenset(out)


@lru_cache(maxsize=1 << 17)
def term_names(d: ProofTerm) -> frozenset:
    spec = _SPEC[type(d)]
    out = set()
    for f in spec.free + tuple(spec.binds):
        out.update(_field_names(d, f))
    for k in spec.kids:
        out |= term_names(getattr(d, k))
    return frozenset(out)


def rename_term(d: ProofTerm, mapping: Mapping[Name, Name]) -> ProofTerm:
    """Capture-avoiding simultaneous renaming of free names."""
    fn = term_free_names(d)
    m = {k: v for k, v in mapping.items() if k != v and k in fn}
    if not m:
        return d
    spec = _SPEC[type(d)]
    kwargs = {f: getattr(d, f) for f in d.__match_args__}
    for f in spec.free:
        v = getattr(d, f)
        kwargs[f] = tuple(m.get(a, a) for a in v) if isinstance(v, tuple) else m.get(v, v)
    child_maps = {k: dict(m) for k in spec.kids}
    avoid = set(term_names(d)) | set(m.values()) | set(m)
    for b, kids in spec.binds.items():
        v = getattr(d, b)
        inner = set()
        for k in kids:
            inner |= term_free_names(getattr(d, k))
        relevant = {k: w for k, w in m.items() if k != v and k in inner}
        v2 = v
        if v in relevant.values():
            v2 = fresh(v, avoid)
            avoid.add(v2)
            kwargs[b] = v2
        for k in kids:
            child_maps[k].pop(v, None)
            if v2 != v:
                child_maps[k][v] = v2
    for k in spec.kids:
        kwargs[k] = rename_term(getattr(d, k), child_maps[k])
    return type(d)(**kwargs)


def rebuild(d: ProofTerm, **changes) -> ProofTerm:
    kwargs = {f: getattr(d, f) for f in d.__match_args__}
    kwargs.update(changes)
    return type(d)(**kwargs)


def get_at(d: ProofTerm, path: Iterable[int]) -> ProofTerm:
    for i in path:
        d = d.children()[i]
    return d


def replace_at(d: ProofTerm, path: tuple, new: ProofTerm) -> ProofTerm:
    if not path:
        return new
    f = _SPEC[type(d)].kids[path[0]]
    return rebuild(d, **{f: replace_at(getattr(d, f), path[1:], new)})


def positions(d: ProofTerm, path: tuple = ()) -> Iterator[tuple[tuple, ProofTerm]]:
    """Preorder (path, subterm) pairs."""
    yield path, d
    for i, c in enumerate(d.children()):
        yield from positions(c, path + (i,))


def term_size_nodes(d: ProofTerm) -> int:
    return 1 + sum(term_size_nodes(c) for c in d.children())


# ---------------------------------------------------------------- extraction


@lru_cache(maxsize=1 << 17)
def extract(d: ProofTerm) -> P.Process:
    match d:
        case OneR():
            return P.NIL
        case OneL(_, body) | BangLSharp(_, body) | BangLBang(_, body):
            return extract(body)
        case TensorL(x, y, body) | LolliR(x, y, body):
            return P.In(x, y, extract(body))
        case TensorR(x, y, left, right) | LolliL(x, y, left, right):
            return P.New(y, P.Out(x, y, P.Par(extract(left), extract(right))))
        case PlusL(x, left, right) | WithR(x, left, right):
            return P.Case(x, extract(left), extract(right))
        case PlusR1(x, _, body) | WithL1(x, _, body):
            return P.SelL(x, extract(body))
        case PlusR2(x, _, body) | WithL2(x, _, body):
            return P.SelR(x, extract(body))
        case FlatSharp(x, y, body) | FlatBang(x, y, body):
            return P.New(y, P.Out(x, y, extract(body)))
        case BangR(x, y, _, body):
            return P.RepIn(x, y, extract(body))
        case Cut(x, left, right):
            return P.New(x, P.Par(extract(left), extract(right)))
        case CutBang(x, y, left, right) | CutSharp(x, y, left, right):
            return P.New(x, P.Par(P.RepIn(x, y, extract(left)), extract(right)))
    raise TypeError(d)


# ---------------------------------------------------------------- synthesis


@dataclass(frozen=True)
class TypingEvidence:
    judgment: Judgment
    per_node: dict  # path -> Judgment


def _disjoint(rule: str, a: Context, b: Context, err) -> None:
    for k in a:
        if k in b:
            raise err(f"{k} occurs in both premises", rule, k)


def _agree(rule: str, a: Context, b: Context) -> Context:
    for k in a:
        if k in b and a[k] != b[k]:
            raise TypeMismatch(f"{k} has type {type_text(a[k])} and {type_text(b[k])}", rule, k)
    return a.extend(b)


def _multiplicative(rule: str, j1: tuple, j2: tuple) -> tuple:
    g1, d1, t1 = j1
    g2, d2, t2 = j2
    _disjoint(rule, g1, g2, AuxiliaryNonlinear)
    _disjoint(rule, t1, t2, NameClash)
    return g1.extend(g2), _agree(rule, d1, d2), t1.extend(t2)


def _additive(rule: str, chan: Name, j1: tuple, j2: tuple) -> tuple:
    g1, d1, t1 = j1
    g2, d2, t2 = j2
    if t1 != t2:
        raise ContextMismatch(f"branches have linear contexts {t1.text()} and {t2.text()}", rule, chan)
    return _agree(rule, g1, g2), _agree(rule, d1, d2), t1


def _ctx(j: Judgment) -> tuple:
    return j.aux, j.mux, j.lin


def _mk(rule: str, ctx: tuple, subject: Name, offered: SessionType) -> Judgment:
    g, dl, t = ctx
    for a, b in ((g, dl), (g, t), (dl, t)):
        for k in a:
            if k in b:
                raise NameClash(f"{k} occurs in two contexts", rule, k)
    for c in ctx:
        if subject in c:
            raise NameClash(f"subject {subject} also occurs in a context", rule, subject)
    return Judgment(g, dl, t, subject, offered)


def _mentions(j: Judgment, x: Name) -> bool:
    return x == j.subject or x in j.aux or x in j.mux or x in j.lin


def _need_lin(rule: str, j: Judgment, x: Name) -> SessionType:
    if x not in j.lin:
        raise ContextMismatch(f"{x} is not in the linear context of the premise", rule, x)
    return j.lin[x]


def _need_subject(rule: str, j: Judgment, x: Name) -> SessionType:
    if j.subject != x:
        raise ContextMismatch(f"premise offers {j.subject}, expected {x}", rule, x)
    return j.offered


def _fresh_for(rule: str, j: Judgment, x: Name) -> None:
    if _mentions(j, x):
        raise NameClash(f"{x} is already used in the premise", rule, x)


def _box(rule: str, j: Judgment, x: Name) -> None:
    if j.mux or j.lin:
        raise ContextMismatch("a box premise must have empty multiplexor and linear contexts", rule, x)


@lru_cache(maxsize=1 << 17)
def judgment_of(d: ProofTerm) -> Judgment:
    """Minimal judgment of ``d``; raises a TypingError subclass when ``d`` is ill-typed."""
    match d:
        case OneR(x):
            return Judgment(EMPTY, EMPTY, EMPTY, x, ONE)
        case OneL(x, body):
            j = judgment_of(body)
            _fresh_for("1L", j, x)
            return _mk("1L", (j.aux, j.mux, j.lin.extend({x: ONE})), j.subject, j.offered)
        case TensorL(x, y, body):
            j = judgment_of(body)
            if x == y:
                raise NameClash("channel and bound name coincide", "tensL", x)
            a, b = _need_lin("tensL", j, y), _need_lin("tensL", j, x)
            lin = j.lin.without(x, y).extend({x: Tensor(a, b)})
            return _mk("tensL", (j.aux, j.mux, lin), j.subject, j.offered)
        case TensorR(x, y, left, right):
            jl, jr = judgment_of(left), judgment_of(right)
            if x == y:
                raise NameClash("channel and payload coincide", "tensR", x)
            a, b = _need_subject("tensR", jl, y), _need_subject("tensR", jr, x)
            _fresh_for_ctx("tensR", jr, y)
            ctx = _multiplicative("tensR", _ctx(jl), _ctx(jr))
            return _mk("tensR", ctx, x, Tensor(a, b))
        case LolliL(x, y, left, right):
            jl, jr = judgment_of(left), judgment_of(right)
            if x == y:
                raise NameClash("channel and payload coincide", "lolliL", x)
            a = _need_subject("lolliL", jl, y)
            b = _need_lin("lolliL", jr, x)
            _fresh_for_ctx("lolliL", jr, y)
            if jr.subject == y:
                raise NameClash(f"{y} is already used in the premise", "lolliL", y)
            ctx = _multiplicative("lolliL", _ctx(jl), (jr.aux, jr.mux, jr.lin.without(x)))
            g, dl, t = ctx
            return _mk("lolliL", (g, dl, t.extend({x: Lolli(a, b)})), jr.subject, jr.offered)
        case LolliR(x, y, body):
            j = judgment_of(body)
            b = _need_subject("lolliR", j, x)
            a = _need_lin("lolliR", j, y)
            return _mk("lolliR", (j.aux, j.mux, j.lin.without(y)), x, Lolli(a, b))
        case PlusL(x, left, right):
            jl, jr = judgment_of(left), judgment_of(right)
            a, b = _need_lin("plusL", jl, x), _need_lin("plusL", jr, x)
            _same_offer("plusL", jl, jr, x)
            g, dl, t = _additive("plusL", x, (jl.aux, jl.mux, jl.lin.without(x)), (jr.aux, jr.mux, jr.lin.without(x)))
            return _mk("plusL", (g, dl, t.extend({x: Plus(a, b)})), jl.subject, jl.offered)
        case PlusR1(x, other, body) | PlusR2(x, other, body):
            j = judgment_of(body)
            rule = "plusR1" if isinstance(d, PlusR1) else "plusR2"
            a = _need_subject(rule, j, x)
            ty = Plus(a, other) if isinstance(d, PlusR1) else Plus(other, a)
            return _mk(rule, _ctx(j), x, ty)
        case WithL1(x, other, body) | WithL2(x, other, body):
            j = judgment_of(body)
            rule = "withL1" if isinstance(d, WithL1) else "withL2"
            a = _need_lin(rule, j, x)
            ty = With(a, other) if isinstance(d, WithL1) else With(other, a)
            return _mk(rule, (j.aux, j.mux, j.lin.extend({x: ty})), j.subject, j.offered)
        case WithR(x, left, right):
            jl, jr = judgment_of(left), judgment_of(right)
            a, b = _need_subject("withR", jl, x), _need_subject("withR", jr, x)
            ctx = _additive("withR", x, _ctx(jl), _ctx(jr))
            return _mk("withR", ctx, x, With(a, b))
        case FlatBang(x, y, body):
            j = judgment_of(body)
            a = _need_lin("flat!", j, y)
            if x in j.aux:
                raise AuxiliaryNonlinear(f"auxiliary channel {x} used more than once", "flat!", x)
            _fresh_for("flat!", j, x)
            return _mk("flat!", (j.aux.extend({x: a}), j.mux, j.lin.without(y)), j.subject, j.offered)
        case FlatSharp(x, y, body):
            j = judgment_of(body)
            a = _need_lin("flat#", j, y)
            if x in j.aux or x in j.lin or x == j.subject:
                raise MultiplexorRequired(f"{x} must live in the multiplexor context", "flat#", x)
            if x in j.mux and j.mux[x] != a:
                raise TypeMismatch(f"{x} has type {type_text(j.mux[x])}, spawned {type_text(a)}", "flat#", x)
            return _mk("flat#", (j.aux, j.mux.extend({x: a}), j.lin.without(y)), j.subject, j.offered)
        case BangLBang(x, body, ty) | BangLSharp(x, body, ty):
            j = judgment_of(body)
            sharp = isinstance(d, BangLSharp)
            rule = "bangL#" if sharp else "bangL!"
            home, other = (j.mux, j.aux) if sharp else (j.aux, j.mux)
            if x in other:
                raise ContextMismatch(f"{x} is in the wrong exponential context for {rule}", rule, x)
            if x in j.lin or x == j.subject:
                raise NameClash(f"{x} is already used linearly", rule, x)
            if x in home:
                a = home[x]
                if ty is not None and ty != a:
                    raise TypeMismatch(f"annotation {type_text(ty)} differs from {type_text(a)}", rule, x)
            elif ty is not None:
                a = ty
            else:
                raise ContextMismatch(f"{x} is unused and carries no type annotation", rule, x)
            home = home.without(x)
            g, dl = (j.aux, home) if sharp else (home, j.mux)
            return _mk(rule, (g, dl, j.lin.extend({x: Bang(a)})), j.subject, j.offered)
        case BangR(x, y, aux, body):
            j = judgment_of(body)
            a = _need_subject("bangR", j, y)
            _box("bangR", j, x)
            if len(set(aux)) != len(aux):
                raise NameClash("repeated auxiliary name", "bangR", x)
            for n in aux:
                if n not in j.aux:
                    raise AuxiliaryNonlinear(f"auxiliary channel {n} is not used by the box body", "bangR", n)
            for n in j.aux:
                if n not in aux:
                    raise ContextMismatch(f"{n} is used by the box body but not listed", "bangR", n)
            lin = Context(tuple((n, Bang(j.aux[n])) for n in aux))
            return _mk("bangR", (EMPTY, EMPTY, lin), x, Bang(a))
        case Cut(x, left, right):
            jl, jr = judgment_of(left), judgment_of(right)
            a = _need_subject("cut", jl, x)
            b = _need_lin("cut", jr, x)
            if a != b:
                raise TypeMismatch(f"cut formula {type_text(a)} vs {type_text(b)}", "cut", x)
            _fresh_for_ctx("cut", jl, x)
            ctx = _multiplicative("cut", _ctx(jl), (jr.aux, jr.mux, jr.lin.without(x)))
            return _mk("cut", ctx, jr.subject, jr.offered)
        case CutBang(x, y, left, right) | CutSharp(x, y, left, right):
            sharp = isinstance(d, CutSharp)
            rule = "cut#" if sharp else "cut!"
            jl, jr = judgment_of(left), judgment_of(right)
            a = _need_subject(rule, jl, y)
            _box(rule, jl, x)
            _fresh_for_ctx(rule, jl, x)
            home, other = (jr.mux, jr.aux) if sharp else (jr.aux, jr.mux)
            if x in other or x in jr.lin or x == jr.subject:
                raise ContextMismatch(f"{x} is not in the {'multiplexor' if sharp else 'auxiliary'} context", rule, x)
            if x in home and home[x] != a:
                raise TypeMismatch(f"cut formula {type_text(a)} vs {type_text(home[x])}", rule, x)
            home = home.without(x)
            if sharp:
                ctx = (jr.aux, _agree(rule, home, jl.aux), jr.lin)
            else:
                _disjoint(rule, jl.aux, home, AuxiliaryNonlinear)
                ctx = (jl.aux.extend(home), jr.mux, jr.lin)
            return _mk(rule, ctx, jr.subject, jr.offered)
    raise TypeError(d)


def _fresh_for_ctx(rule: str, j: Judgment, x: Name) -> None:
    if x in j.aux or x in j.mux or x in j.lin:
        raise NameClash(f"{x} is captured by the binder", rule, x)


def _same_offer(rule: str, j1: Judgment, j2: Judgment, x: Name) -> None:
    if j1.subject != j2.subject:
        raise ContextMismatch(f"branches offer {j1.subject} and {j2.subject}", rule, x)
    if j1.offered != j2.offered:
        raise TypeMismatch("branches offer different types", rule, x)


def synthesize(d: ProofTerm) -> TypingEvidence:
    per_node = {path: judgment_of(sub) for path, sub in positions(d)}
    return TypingEvidence(per_node[()], per_node)


def is_typable(d: ProofTerm) -> bool:
    try:
        judgment_of(d)
    except Exception:
        return False
    return True


def check(d: ProofTerm, declared: Judgment) -> TypingEvidence:
    """Synthesize and compare against ``declared``, admitting weakening of Γ and Δ."""
    ev = synthesize(d)
    j = ev.judgment
    if j.subject != declared.subject or j.offered != declared.offered:
        raise DeclaredMismatch(
            f"offers {j.subject}: {type_text(j.offered)}, declared {declared.subject}: {type_text(declared.offered)}"
        )
    if j.lin != declared.lin:
        raise DeclaredMismatch(f"linear context {j.lin.text()} differs from declared {declared.lin.text()}")
    for mine, theirs, label in ((j.aux, declared.aux, "auxiliary"), (j.mux, declared.mux, "multiplexor")):
        for k, a in mine.items():
            if theirs.get(k) != a:
                raise DeclaredMismatch(f"{label} binding {k}: {type_text(a)} not declared", channel=k)
    try:
        _mk("declared", (declared.aux, declared.mux, declared.lin), declared.subject, declared.offered)
    except NameClash as e:
        raise DeclaredMismatch(f"declared judgment is malformed: {e}") from None
    return ev


# ---------------------------------------------------------------- lifting


@lru_cache(maxsize=1 << 16)
def lift(d: ProofTerm) -> ProofTerm:
    """Move every auxiliary channel of ``d`` into the multiplexor context."""
    match d:
        case FlatBang(x, y, body):
            return FlatSharp(x, y, lift(body))
        case BangLBang(x, body, ty):
            return BangLSharp(x, lift(body), ty)
        case CutBang(x, y, left, right):
            return CutSharp(x, y, left, lift(right))
        case CutSharp(x, y, left, right):
            return CutSharp(x, y, left, lift(right))
        case BangR():
            return d
    kids = _SPEC[type(d)].kids
    if not kids:
        return d
    return rebuild(d, **{k: lift(getattr(d, k)) for k in kids})


# ---------------------------------------------------------------- text

RULE_WORDS = {
    "1R", "1L", "tensL", "tensR", "lolliL", "lolliR", "plusL", "plusR1", "plusR2",
    "withL1", "withL2", "withR", "flat!", "flat#", "bangL!", "bangL#", "bangR", "cut", "cut!", "cut#",
}

_TERM_TOKENS = [
    ("RULE", r"(?:1R|1L|flat[!#]|bangL[!#]|cut[!#])(?![A-Za-z0-9_'])"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_']*"),
] + [t for t in TYPE_TOKENS] + [
    ("TURN", r"\|-"),
    ("LB", r"\{"),
    ("RB", r"\}"),
    ("COLON", r":"),
    ("SEMI", r";"),
    ("COMMA", r","),
]


def _ty(a: SessionType) -> str:
    t = type_text(a)
    return f"({t})" if isinstance(a, (Tensor, Lolli, Plus, With)) else t


@lru_cache(maxsize=1 << 16)
def term_text(d: ProofTerm) -> str:
    t = term_text
    match d:
        case OneR(x):
            return f"(1R {x})"
        case OneL(x, b):
            return f"(1L {x} {t(b)})"
        case TensorL(x, y, b):
            return f"(tensL {x} {y} {t(b)})"
        case TensorR(x, y, l, r):
            return f"(tensR {x} {y} {t(l)} {t(r)})"
        case LolliL(x, y, l, r):
            return f"(lolliL {x} {y} {t(l)} {t(r)})"
        case LolliR(x, y, b):
            return f"(lolliR {x} {y} {t(b)})"
        case PlusL(x, l, r):
            return f"(plusL {x} {t(l)} {t(r)})"
        case PlusR1(x, a, b):
            return f"(plusR1 {x} {_ty(a)} {t(b)})"
        case PlusR2(x, a, b):
            return f"(plusR2 {x} {_ty(a)} {t(b)})"
        case WithL1(x, a, b):
            return f"(withL1 {x} {_ty(a)} {t(b)})"
        case WithL2(x, a, b):
            return f"(withL2 {x} {_ty(a)} {t(b)})"
        case WithR(x, l, r):
            return f"(withR {x} {t(l)} {t(r)})"
        case FlatBang(x, y, b):
            return f"(flat! {x} {y} {t(b)})"
        case FlatSharp(x, y, b):
            return f"(flat# {x} {y} {t(b)})"
        case BangLBang(x, b, ty) | BangLSharp(x, b, ty):
            word = "bangL!" if isinstance(d, BangLBang) else "bangL#"
            ann = "" if ty is None else f" {_ty(ty)}"
            return f"({word} {x}{ann} {t(b)})"
        case BangR(x, y, aux, b):
            return f"(bangR {x} {y} ({' '.join(aux)}) {t(b)})"
        case Cut(x, l, r):
            return f"(cut {x} {t(l)} {t(r)})"
        case CutBang(x, y, l, r):
            return f"(cut! {x} {y} {t(l)} {t(r)})"
        case CutSharp(x, y, l, r):
            return f"(cut# {x} {y} {t(l)} {t(r)})"
    raise TypeError(d)


def parse_term(text: str) -> ProofTerm:
    cur = Cursor(tokenize(text, _TERM_TOKENS))
    d = _parse_term(cur)
    cur.expect_end()
    return d


def _tname(cur: Cursor) -> Name:
    tok = cur.peek()
    if tok.kind != "IDENT" or tok.text in RULE_WORDS:
        raise cur.error("expected a channel name")
    return cur.next().text


def _starts_term(cur: Cursor) -> bool:
    nxt = cur.peek(1)
    return cur.peek().kind == "LP" and (nxt.kind == "RULE" or (nxt.kind == "IDENT" and nxt.text in RULE_WORDS))


def _parse_term(cur: Cursor) -> ProofTerm:
    if cur.peek().kind != "LP":
        raise cur.error("expected '(' starting a proof term")
    cur.next()
    tok = cur.next()
    rule = tok.text
    if rule not in RULE_WORDS:
        raise cur.error("expected a rule name", tok)
    n = lambda: _tname(cur)  # noqa: E731
    sub = lambda: _parse_term(cur)  # noqa: E731
    if rule == "1R":
        d = OneR(n())
    elif rule == "1L":
        d = OneL(n(), sub())
    elif rule in ("tensL", "lolliR", "flat!", "flat#"):
        cls = {"tensL": TensorL, "lolliR": LolliR, "flat!": FlatBang, "flat#": FlatSharp}[rule]
        d = cls(n(), n(), sub())
    elif rule in ("tensR", "lolliL", "cut!", "cut#"):
        cls = {"tensR": TensorR, "lolliL": LolliL, "cut!": CutBang, "cut#": CutSharp}[rule]
        d = cls(n(), n(), sub(), sub())
    elif rule in ("plusL", "withR", "cut"):
        cls = {"plusL": PlusL, "withR": WithR, "cut": Cut}[rule]
        d = cls(n(), sub(), sub())
    elif rule in ("plusR1", "plusR2", "withL1", "withL2"):
        cls = {"plusR1": PlusR1, "plusR2": PlusR2, "withL1": WithL1, "withL2": WithL2}[rule]
        x = n()
        d = cls(x, parse_type_at(cur), sub())
    elif rule in ("bangL!", "bangL#"):
        cls = BangLBang if rule == "bangL!" else BangLSharp
        x = n()
        ty = None if _starts_term(cur) else parse_type_at(cur)
        d = cls(x, sub(), ty)
    else:  # bangR
        x, y = n(), n()
        if cur.peek().kind != "LP":
            raise cur.error("expected '(' opening the auxiliary name list")
        cur.next()
        aux = []
        while cur.peek().kind != "RP":
            aux.append(n())
        cur.next()
        d = BangR(x, y, tuple(aux), sub())
    if cur.peek().kind != "RP":
        raise cur.error("expected ')'")
    cur.next()
    return d


def _parse_context(cur: Cursor, label: str) -> Context:
    tok = cur.peek()
    if tok.kind != "IDENT" or tok.text != label:
        raise cur.error(f"expected context label {label!r}")
    cur.next()
    cur.expect(":")
    cur.expect("{")
    items = {}
    while not cur.at("}"):
        k = _tname(cur)
        if k in items:
            raise cur.error(f"{k} bound twice in one context")
        cur.expect(":")
        items[k] = parse_type_at(cur)
        if cur.at(","):
            cur.next()
        elif not cur.at("}"):
            raise cur.error("expected ',' or '}'")
    cur.next()
    return Context(tuple(items.items()))


def _parse_judgment(cur: Cursor) -> Judgment:
    g = _parse_context(cur, "G")
    cur.expect(";")
    dl = _parse_context(cur, "D")
    cur.expect(";")
    t = _parse_context(cur, "T")
    cur.expect("|-")
    x = _tname(cur)
    cur.expect(":")
    return Judgment(g, dl, t, x, parse_type_at(cur))


def parse_judgment(text: str) -> Judgment:
    cur = Cursor(tokenize(text, _TERM_TOKENS))
    j = _parse_judgment(cur)
    cur.expect_end()
    return j


def parse_thm(text: str) -> tuple[ProofTerm, Judgment | None]:
    """A proof term optionally followed by its declared judgment."""
    cur = Cursor(tokenize(text, _TERM_TOKENS))
    d = _parse_term(cur)
    j = None if cur.peek().kind == "EOF" else _parse_judgment(cur)
    cur.expect_end()
    return d, j


def thm_text(d: ProofTerm, j: Judgment) -> str:
    return f"{term_text(d)}\n{j.text()}\n"

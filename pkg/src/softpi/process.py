"""The process calculus: syntax, binding, size, prenex soups and structural congruence."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from ._lex import Cursor, tokenize
from ._node import Node, fresh, node

Name = str


class Process(Node):
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@node
class Nil(Process):
    pass


@node
class Par(Process):
    left: Process
    right: Process


@node
class New(Process):
    bound: Name
    body: Process


@node
class In(Process):
    chan: Name
    bound: Name
    body: Process


@node
class Out(Process):
    chan: Name
    payload: Name
    body: Process


@node
class RepIn(Process):
    chan: Name
    bound: Name
    body: Process


@node
class SelL(Process):
    chan: Name
    body: Process


@node
class SelR(Process):
    chan: Name
    body: Process


@node
class Case(Process):
    chan: Name
    left: Process
    right: Process


NIL = Nil()
PREFIXED = (In, Out, RepIn, SelL, SelR, Case)

_CACHE = 1 << 17


def par_all(items: Iterable[Process]) -> Process:
    """Parallel composition of a list: left-nested when short, balanced when long."""
    items = list(items)
    if not items:
        return NIL
    if len(items) <= 32:
        acc = items[0]
        for q in items[1:]:
            acc = Par(acc, q)
        return acc
    mid = len(items) // 2
    return Par(par_all(items[:mid]), par_all(items[mid:]))


def new_all(binders: Iterable[Name], body: Process) -> Process:
    for b in reversed(list(binders)):
        body = New(b, body)
    return body


# ---------------------------------------------------------------- names


@lru_cache(maxsize=_CACHE)
def free_names(p: Process) -> frozenset:
    match p:
        case Nil():
            return frozenset()
        case Par(l, r):
            return free_names(l) | free_names(r)
        case New(b, body):
            return free_names(body) - {b}
        case In(c, b, body) | RepIn(c, b, body):
            return (free_names(body) - {b}) | {c}
        case Out(c, y, body):
            return free_names(body) | {c, y}
        case SelL(c, body) | SelR(c, body):
            return free_names(body) | {c}
        case Case(c, l, r):
            return free_names(l) | free_names(r) | {c}
    raise TypeError(p)


@lru_cache(maxsize=_CACHE)
def all_names(p: Process) -> frozenset:
    """Every name occurring in ``p``, free or bound."""
    match p:
        case Nil():
            return frozenset()
        case Par(l, r) | Case(_, l, r):
            out = all_names(l) | all_names(r)
            return out | {p.chan} if isinstance(p, Case) else out
        case New(b, body):
            return all_names(body) | {b}
        case In(c, b, body) | RepIn(c, b, body) | Out(c, b, body):
            return all_names(body) | {c, b}
        case SelL(c, body) | SelR(c, body):
            return all_names(body) | {c}
    raise TypeError(p)


def _enter(b: Name, body: Process, m: dict) -> tuple[Name, dict]:
    fn = free_names(body)
    m2 = {k: v for k, v in m.items() if k != b and k in fn}
    if m2 and b in m2.values():
        b2 = fresh(b, set(m2.values()) | fn | set(m2))
        m2[b] = b2
        return b2, m2
    return b, m2


def _rename(p: Process, m: dict) -> Process:
    if not m:
        return p
    match p:
        case Nil():
            return p
        case Par(l, r):
            return Par(_sub(l, m), _sub(r, m))
        case New(b, body):
            b2, m2 = _enter(b, body, m)
            return New(b2, _rename(body, m2))
        case In(c, b, body):
            b2, m2 = _enter(b, body, m)
            return In(m.get(c, c), b2, _rename(body, m2))
        case RepIn(c, b, body):
            b2, m2 = _enter(b, body, m)
            return RepIn(m.get(c, c), b2, _rename(body, m2))
        case Out(c, y, body):
            return Out(m.get(c, c), m.get(y, y), _sub(body, m))
        case SelL(c, body):
            return SelL(m.get(c, c), _sub(body, m))
        case SelR(c, body):
            return SelR(m.get(c, c), _sub(body, m))
        case Case(c, l, r):
            return Case(m.get(c, c), _sub(l, m), _sub(r, m))
    raise TypeError(p)


def _sub(p: Process, m: dict) -> Process:
    fn = free_names(p)
    m2 = {k: v for k, v in m.items() if k in fn}
    return _rename(p, m2) if m2 else p


def rename(p: Process, mapping: Mapping[Name, Name]) -> Process:
    """Capture-avoiding simultaneous renaming of free names."""
    return _sub(p, {k: v for k, v in mapping.items() if k != v})


def substitute(p: Process, src: Name, dst: Name) -> Process:
    """Replace free ``src`` by ``dst``, renaming binders to avoid capture."""
    return rename(p, {src: dst})


@lru_cache(maxsize=_CACHE)
def size(p: Process) -> int:
    match p:
        case Nil():
            return 0
        case Par(l, r):
            return size(l) + size(r)
        case New(_, body):
            return size(body)
        case In(_, _, body) | Out(_, _, body) | RepIn(_, _, body) | SelL(_, body) | SelR(_, body):
            return size(body) + 1
        case Case(_, l, r):
            return size(l) + size(r) + 1
    raise TypeError(p)


def node_count(p: Process) -> int:
    return 1 + sum(node_count(c) for c in p.children())


def bde_process(p: Process) -> int:
    """Nesting depth of replicated inputs."""
    match p:
        case RepIn(_, _, body):
            return 1 + bde_process(body)
        case _:
            return max((bde_process(c) for c in p.children()), default=0)


def alpha_normal(p: Process) -> Process:
    """Rename every binder to a positional token, in preorder."""
    counter = [0]

    def go(q: Process, env: dict) -> Process:
        def nm(x: Name) -> Name:
            return env.get(x, x)

        def bind(b: Name) -> tuple[Name, dict]:
            tok = f"\x00{counter[0]}"
            counter[0] += 1
            return tok, {**env, b: tok}

        match q:
            case Nil():
                return q
            case Par(l, r):
                return Par(go(l, env), go(r, env))
            case New(b, body):
                t, e = bind(b)
                return New(t, go(body, e))
            case In(c, b, body):
                t, e = bind(b)
                return In(nm(c), t, go(body, e))
            case RepIn(c, b, body):
                t, e = bind(b)
                return RepIn(nm(c), t, go(body, e))
            case Out(c, y, body):
                return Out(nm(c), nm(y), go(body, env))
            case SelL(c, body):
                return SelL(nm(c), go(body, env))
            case SelR(c, body):
                return SelR(nm(c), go(body, env))
            case Case(c, l, r):
                return Case(nm(c), go(l, env), go(r, env))
        raise TypeError(q)

    return go(p, {})


def alpha_eq(p: Process, q: Process) -> bool:
    return alpha_normal(p) == alpha_normal(q)


# ---------------------------------------------------------------- prenex soups


@dataclass(frozen=True)
class Soup:
    """A process as ``new binders. (c1 | ... | ck)`` with prefix-headed components.

    Binders are pairwise distinct and distinct from every free name.
    """

    binders: tuple
    comps: tuple

    def to_process(self) -> Process:
        used = set()
        for c in self.comps:
            used |= free_names(c)
        return new_all([b for b in self.binders if b in used], par_all(self.comps))


def prenex(p: Process, avoid: Iterable[Name] = ()) -> Soup:
    """Hoist every unguarded restriction to the top, renaming binders apart.

    Components keep their left-to-right order; Nil components vanish.
    """
    taken = set(free_names(p)) | set(avoid)
    binders: list[Name] = []
    comps: list[Process] = []
    stack = [p]
    while stack:
        q = stack.pop()
        match q:
            case Nil():
                pass
            case Par(l, r):
                stack.append(r)
                stack.append(l)
            case New(b, body):
                b2 = fresh(b, taken)
                taken.add(b2)
                binders.append(b2)
                stack.append(substitute(body, b, b2) if b2 != b else body)
            case _:
                comps.append(q)
    return Soup(tuple(binders), tuple(comps))


# ---------------------------------------------------------------- text


_PROC_TOKENS = [
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_']*"),
    ("ZERO", r"0"),
    ("PUNCT", r"[|.(){}:;?!]"),
]
_KEYWORDS = {"new", "case", "inl", "inr"}


def parse_process(text: str) -> Process:
    cur = Cursor(tokenize(text, _PROC_TOKENS))
    p = _parse_par(cur)
    cur.expect_end()
    return p


def _name(cur: Cursor) -> Name:
    tok = cur.peek()
    if tok.kind != "IDENT" or tok.text in _KEYWORDS:
        raise cur.error("expected a name")
    return cur.next().text


def _parse_par(cur: Cursor) -> Process:
    p = _parse_unary(cur)
    while cur.at("|"):
        cur.next()
        p = Par(p, _parse_unary(cur))
    return p


def _parse_cont(cur: Cursor) -> Process:
    if cur.at("."):
        cur.next()
        return _parse_unary(cur)
    return NIL


def _parse_unary(cur: Cursor) -> Process:
    tok = cur.peek()
    if tok.kind == "ZERO":
        cur.next()
        return NIL
    if cur.at("("):
        cur.next()
        p = _parse_par(cur)
        cur.expect(")")
        return p
    if cur.at("new"):
        cur.next()
        b = _name(cur)
        cur.expect(".")
        return New(b, _parse_unary(cur))
    if cur.at("case"):
        cur.next()
        c = _name(cur)
        cur.expect("{")
        cur.expect("inl")
        cur.expect(":")
        left = _parse_par(cur)
        cur.expect(";")
        cur.expect("inr")
        cur.expect(":")
        right = _parse_par(cur)
        cur.expect("}")
        return Case(c, left, right)
    if cur.at("!"):
        cur.next()
        c = _name(cur)
        cur.expect("?")
        cur.expect("(")
        b = _name(cur)
        cur.expect(")")
        return RepIn(c, b, _parse_cont(cur))
    if tok.kind == "IDENT" and tok.text not in _KEYWORDS:
        c = _name(cur)
        if cur.at("?") or cur.at("!"):
            is_in = cur.next().text == "?"
            cur.expect("(")
            b = _name(cur)
            cur.expect(")")
            body = _parse_cont(cur)
            return In(c, b, body) if is_in else Out(c, b, body)
        if cur.at("."):
            cur.next()
            if cur.at("inl") or cur.at("inr"):
                left = cur.next().text == "inl"
                body = _parse_cont(cur)
                return SelL(c, body) if left else SelR(c, body)
            raise cur.error("expected 'inl' or 'inr'")
        raise cur.error("expected '?', '!' or '.' after a channel name")
    raise cur.error("expected a process")


def _unary_text(p: Process) -> str:
    return f"({to_text(p)})" if isinstance(p, Par) else to_text(p)


@lru_cache(maxsize=_CACHE)
def to_text(p: Process) -> str:
    match p:
        case Nil():
            return "0"
        case Par(l, r):
            return f"{to_text(l)} | {_unary_text(r)}"
        case New(b, body):
            return f"new {b}. {_unary_text(body)}"
        case In(c, b, body):
            return f"{c}?({b}). {_unary_text(body)}"
        case Out(c, b, body):
            return f"{c}!({b}). {_unary_text(body)}"
        case RepIn(c, b, body):
            return f"!{c}?({b}). {_unary_text(body)}"
        case SelL(c, body):
            return f"{c}.inl. {_unary_text(body)}"
        case SelR(c, body):
            return f"{c}.inr. {_unary_text(body)}"
        case Case(c, l, r):
            return f"case {c} {{ inl: {to_text(l)} ; inr: {to_text(r)} }}"
    raise TypeError(p)


# ---------------------------------------------------------------- structural congruence
#
# The canonical form hoists unguarded restrictions, drops unused ones, groups
# components connected through shared restricted names, and names restricted
# channels by a canonical labelling. Labelling uses colour refinement followed
# by individualisation, taking the lexicographically least rendering, so it is
# invariant under renaming and reordering. Names introduced at nesting depth d
# carry d in their label, which keeps labels from different depths apart.


def canonical_form(p: Process) -> Process:
    fn = free_names(p)
    prefix = "_"
    while any(n.startswith(prefix) for n in fn):
        prefix += "_"
    return _canon(p, 0, prefix)


def struct_congruent(p: Process, q: Process) -> bool:
    return free_names(p) == free_names(q) and canonical_form(p) == canonical_form(q)


@lru_cache(maxsize=_CACHE)
def _canon(p: Process, depth: int, prefix: str) -> Process:
    soup = prenex(p)
    comps = soup.comps
    if not comps:
        return NIL
    bset = set(soup.binders)
    uses = [free_names(c) & bset for c in comps]
    count = Counter(b for u in uses for b in u)
    shared = {b for b, k in count.items() if k >= 2}
    privs = [tuple(sorted(u - shared)) for u in uses]

    parent = list(range(len(comps)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[Name, int] = {}
    for i, u in enumerate(uses):
        for b in u & shared:
            if b in owner:
                parent[find(i)] = find(owner[b])
            else:
                owner[b] = i
    groups: dict[int, list[int]] = {}
    for i in range(len(comps)):
        groups.setdefault(find(i), []).append(i)

    def tok(kind: str, i: int) -> Name:
        return f"{prefix}s{depth}{kind}{i}"

    ranked = []
    for members in groups.values():
        names = sorted({b for i in members for b in uses[i] & shared})

        def render(mapping: dict, members=members) -> str:
            return "\n".join(
                sorted(to_text(_unit(rename(comps[i], mapping), privs[i], depth, prefix)) for i in members)
            )

        order = _label(names, render, tok)
        local = render({b: tok("L", k) for k, b in enumerate(order)})
        ranked.append((local, members, order))
    ranked.sort(key=lambda t: t[0])

    out = []
    k = 0
    for _, members, order in ranked:
        labels = {b: f"{prefix}n{depth}_{k + j}" for j, b in enumerate(order)}
        k += len(order)
        units = [_unit(rename(comps[i], labels), privs[i], depth, prefix) for i in members]
        units.sort(key=to_text)
        out.append(new_all([labels[b] for b in order], par_all(units)))
    return par_all(out)


@lru_cache(maxsize=_CACHE)
def _unit(c: Process, privs: tuple, depth: int, prefix: str) -> Process:
    """Canonical form of ``new privs. c`` where ``c`` is prefix-headed."""
    if not privs:
        return _canon_comp(c, depth, prefix)

    def tok(kind: str, i: int) -> Name:
        return f"{prefix}q{depth}{kind}{i}"

    def render(mapping: dict) -> str:
        return to_text(_canon_comp(rename(c, mapping), depth, prefix))

    order = _label(list(privs), render, tok)
    labels = {b: f"{prefix}p{depth}_{j}" for j, b in enumerate(order)}
    return new_all([labels[b] for b in order], _canon_comp(rename(c, labels), depth, prefix))


@lru_cache(maxsize=_CACHE)
def _canon_comp(c: Process, depth: int, prefix: str) -> Process:
    inner = depth + 1
    match c:
        case In(x, y, body) | RepIn(x, y, body):
            y2 = f"{prefix}i{depth}"
            body2 = _canon(substitute(body, y, y2), inner, prefix)
            return In(x, y2, body2) if isinstance(c, In) else RepIn(x, y2, body2)
        case Out(x, y, body):
            return Out(x, y, _canon(body, inner, prefix))
        case SelL(x, body):
            return SelL(x, _canon(body, inner, prefix))
        case SelR(x, body):
            return SelR(x, _canon(body, inner, prefix))
        case Case(x, l, r):
            return Case(x, _canon(l, inner, prefix), _canon(r, inner, prefix))
    raise TypeError(c)


def _label(items: list, render: Callable[[dict], str], tok: Callable[[str, int], Name]) -> list:
    """Order ``items`` canonically with respect to ``render``."""
    if len(items) <= 1:
        return list(items)
    colors = _refine(items, {b: 0 for b in items}, render, tok)
    return _individualize(items, colors, render, tok)


def _refine(items, colors, render, tok):
    while True:
        sigs = {}
        for b in items:
            m = {o: tok("c", colors[o]) for o in items}
            m[b] = tok("m", 0)
            sigs[b] = (colors[b], render(m))
        ranks = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        new = {b: ranks[sigs[b]] for b in items}
        if len(ranks) == len(set(colors.values())):
            return new
        colors = new


def _individualize(items, colors, render, tok):
    cells: dict[int, list] = {}
    for b in items:
        cells.setdefault(colors[b], []).append(b)
    if all(len(v) == 1 for v in cells.values()):
        return sorted(items, key=colors.get)
    target = min(c for c, v in cells.items() if len(v) > 1)
    best = None
    for b in cells[target]:
        c2 = {o: 2 * colors[o] + (1 if colors[o] == target and o != b else 0) for o in items}
        c2 = _refine(items, c2, render, tok)
        order = _individualize(items, c2, render, tok)
        final = render({o: tok("L", i) for i, o in enumerate(order)})
        if best is None or final < best[0]:
            best = (final, order)
    return best[1]


# ---------------------------------------------------------------- random congruence moves


def _positions(p: Process, path=()):
    yield path, p
    for i, c in enumerate(p.children()):
        yield from _positions(c, path + (i,))


def get_at(p: Node, path: tuple) -> Node:
    for i in path:
        p = p.children()[i]
    return p


def replace_at(p: Node, path: tuple, new: Node) -> Node:
    if not path:
        return new
    fields = [f for f in p.__match_args__ if isinstance(getattr(p, f), Node)]
    kwargs = {f: getattr(p, f) for f in p.__match_args__}
    f = fields[path[0]]
    kwargs[f] = replace_at(kwargs[f], path[1:], new)
    return type(p)(**kwargs)


def _axiom_moves(q: Process, avoid: set) -> list[Process]:
    """Results of applying one congruence axiom, in either direction, at the root of ``q``."""
    out = [Par(q, NIL)]
    if isinstance(q, Nil):
        out.append(New(fresh("v", avoid), NIL))
    if isinstance(q, Par):
        out.append(Par(q.right, q.left))
        if isinstance(q.left, Par):
            out.append(Par(q.left.left, Par(q.left.right, q.right)))
        if isinstance(q.right, Par):
            out.append(Par(Par(q.left, q.right.left), q.right.right))
        if isinstance(q.right, Nil):
            out.append(q.left)
        if isinstance(q.left, New) and q.left.bound not in free_names(q.right):
            out.append(New(q.left.bound, Par(q.left.body, q.right)))
    if isinstance(q, New):
        b, body = q.bound, q.body
        b2 = fresh(b + "a", avoid | {b})
        out.append(New(b2, substitute(body, b, b2)))
        if isinstance(body, New):
            out.append(New(body.bound, New(b, body.body)))
        if isinstance(body, Nil):
            out.append(NIL)
        if isinstance(body, Par) and b not in free_names(body.right):
            out.append(Par(New(b, body.left), body.right))
    if isinstance(q, (In, RepIn)):
        b2 = fresh(q.bound + "a", avoid | {q.bound})
        out.append(type(q)(q.chan, b2, substitute(q.body, q.bound, b2)))
    return out


def congruence_step(p: Process, rng: random.Random) -> Process:
    """Apply one randomly chosen structural-congruence axiom somewhere in ``p``."""
    avoid = set(all_names(p))
    positions = list(_positions(p))
    while True:
        path, q = positions[rng.randrange(len(positions))]
        moves = _axiom_moves(q, avoid)
        # damp the always-available unit introduction so terms do not only grow
        if len(moves) > 1 and rng.random() < 0.8:
            moves = moves[1:]
        return replace_at(p, path, moves[rng.randrange(len(moves))])

"""Untyped reduction and labelled transitions of processes."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .process import (
    NIL,
    Case,
    In,
    New,
    Out,
    Process,
    RepIn,
    SelL,
    SelR,
    Soup,
    free_names,
    new_all,
    par_all,
    prenex,
    size,
    substitute,
)

Name = str


# ---------------------------------------------------------------- labels


@dataclass(frozen=True)
class Input:
    chan: Name
    received: Name


@dataclass(frozen=True)
class FreeOutput:
    chan: Name
    payload: Name


@dataclass(frozen=True)
class BoundOutput:
    chan: Name
    fresh: Name


@dataclass(frozen=True)
class SelectL:
    chan: Name


@dataclass(frozen=True)
class SelectR:
    chan: Name


@dataclass(frozen=True)
class CoSelectL:
    chan: Name


@dataclass(frozen=True)
class CoSelectR:
    chan: Name


@dataclass(frozen=True)
class Tau:
    pass


Label = Input | FreeOutput | BoundOutput | SelectL | SelectR | CoSelectL | CoSelectR | Tau


def subject(label: Label) -> Name | None:
    return getattr(label, "chan", None)


# ---------------------------------------------------------------- redexes on soups


_SENDERS = (Out, SelL, SelR)
_RECEIVERS = (In, RepIn, Case)


def _compatible(s: Process, r: Process) -> bool:
    if isinstance(s, Out):
        return isinstance(r, (In, RepIn))
    return isinstance(r, Case)


def redexes(soup: Soup) -> list[tuple[int, int]]:
    """Communicating (sender, receiver) index pairs, sorted."""
    receivers: dict[Name, list[int]] = {}
    for j, c in enumerate(soup.comps):
        if isinstance(c, _RECEIVERS):
            receivers.setdefault(c.chan, []).append(j)
    out = []
    for i, c in enumerate(soup.comps):
        if isinstance(c, _SENDERS):
            for j in receivers.get(c.chan, ()):
                if _compatible(c, soup.comps[j]):
                    out.append((i, j))
    return out


def rule_name(soup: Soup, redex: tuple[int, int]) -> str:
    s, r = soup.comps[redex[0]], soup.comps[redex[1]]
    if isinstance(r, RepIn):
        return "spawn"
    if isinstance(s, Out):
        return "comm"
    return "select-left" if isinstance(s, SelL) else "select-right"


class Machine:
    """Mutable soup used to run long reductions without rebuilding processes."""

    def __init__(self, p: Process):
        soup = prenex(p)
        self.binders = list(soup.binders)
        self.comps = list(soup.comps)
        self.taken = set(free_names(p)) | set(self.binders)
        self.size = sum(size(c) for c in self.comps)

    def soup(self) -> Soup:
        return Soup(tuple(self.binders), tuple(self.comps))

    def process(self) -> Process:
        return self.soup().to_process()

    def _expand(self, q: Process) -> list[Process]:
        s = prenex(q, self.taken)
        self.binders.extend(s.binders)
        self.taken.update(s.binders)
        return list(s.comps)

    def first_redex(self) -> tuple[int, int] | None:
        receivers: dict[Name, int] = {}
        for j, c in enumerate(self.comps):
            if isinstance(c, _RECEIVERS):
                key = (c.chan, isinstance(c, Case))
                receivers.setdefault(key, j)
        for i, c in enumerate(self.comps):
            if isinstance(c, _SENDERS):
                j = receivers.get((c.chan, not isinstance(c, Out)))
                if j is not None:
                    return i, j
        return None

    def fire(self, i: int, j: int) -> str:
        s, r = self.comps[i], self.comps[j]
        if not _compatible(s, r) or s.chan != r.chan:
            raise ValueError(f"({i}, {j}) is not a redex")
        self.size -= size(s)
        if isinstance(r, RepIn):
            name = "spawn"
            new_i = self._expand(s.body)
            spawned = self._expand(substitute(r.body, r.bound, s.payload))
            self.comps[i : i + 1] = new_i
            self.comps.extend(spawned)
            self.size += sum(size(c) for c in new_i) + sum(size(c) for c in spawned)
            return name
        self.size -= size(r)
        if isinstance(r, In):
            name = "comm"
            new_i = self._expand(s.body)
            new_j = self._expand(substitute(r.body, r.bound, s.payload))
        else:
            name = "select-left" if isinstance(s, SelL) else "select-right"
            new_i = self._expand(s.body)
            new_j = self._expand(r.left if isinstance(s, SelL) else r.right)
        # splice the higher index first so the lower one stays valid
        for k, repl in sorted(((i, new_i), (j, new_j)), reverse=True):
            self.comps[k : k + 1] = repl
        self.size += sum(size(c) for c in new_i) + sum(size(c) for c in new_j)
        return name


def apply_redex(p: Process, redex: tuple[int, int]) -> Process:
    """Reduct of ``p`` at ``redex``, an index pair into ``prenex(p).comps``."""
    m = Machine(p)
    m.fire(*redex)
    return m.process()


def internal_steps(p: Process) -> list[tuple[tuple[int, int], Process]]:
    soup = prenex(p)
    return [(rx, apply_redex(p, rx)) for rx in redexes(soup)]


# ---------------------------------------------------------------- labelled transitions


def labelled_steps(p: Process) -> list[tuple[Label, Process]]:
    """Early-style visible actions of top-level capabilities, plus one Tau per internal step."""
    soup = prenex(p)
    bound = set(soup.binders)
    out: list[tuple[Label, Process]] = []

    def residual(k: int, repl: list[Process], drop: Name | None = None, extra: list[Process] = ()) -> Process:
        comps = list(soup.comps[:k]) + repl + list(soup.comps[k + 1 :]) + list(extra)
        binders = [b for b in soup.binders if b != drop]
        used = set()
        for c in comps:
            used |= free_names(c)
        return new_all([b for b in binders if b in used], par_all(comps))

    for k, c in enumerate(soup.comps):
        if c.chan in bound:
            continue
        match c:
            case In(x, y, body):
                out.append((Input(x, y), residual(k, [body])))
            case RepIn(x, y, body):
                out.append((Input(x, y), residual(k, [c], extra=[body])))
            case Out(x, y, body):
                if y in bound:
                    out.append((BoundOutput(x, y), residual(k, [body], drop=y)))
                else:
                    out.append((FreeOutput(x, y), residual(k, [body])))
            case SelL(x, body):
                out.append((SelectL(x), residual(k, [body])))
            case SelR(x, body):
                out.append((SelectR(x), residual(k, [body])))
            case Case(x, left, right):
                out.append((CoSelectL(x), residual(k, [left])))
                out.append((CoSelectR(x), residual(k, [right])))
    for _, q in internal_steps(p):
        out.append((Tau(), q))
    return out


# ---------------------------------------------------------------- traces


@dataclass
class TraceStep:
    index: int
    rule: str
    size: int
    process: Process | None = None
    term: object | None = None
    wei: int | None = None
    dupf: int | None = None
    redex: tuple | None = None


@dataclass
class Trace:
    initial: Process
    initial_size: int
    steps: list = field(default_factory=list)
    terminated: bool = False
    final: Process | None = None
    initial_term: object | None = None
    initial_wei: int | None = None
    initial_dupf: int | None = None

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def peak_size(self) -> int:
        return max([self.initial_size] + [s.size for s in self.steps])


def run_to_normal_form(
    p: Process,
    strategy: str = "first",
    max_steps: int = 100_000,
    seed: int = 0,
    record_processes: bool = False,
) -> Trace:
    """Reduce until no redex remains or ``max_steps`` steps were taken."""
    rng = random.Random(seed)
    m = Machine(p)
    trace = Trace(initial=p, initial_size=m.size)
    while True:
        if strategy == "first":
            rx = m.first_redex()
        elif strategy == "random":
            all_rx = redexes(m.soup())
            rx = rng.choice(all_rx) if all_rx else None
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        if rx is None:
            trace.terminated = True
            break
        if len(trace.steps) >= max_steps:
            break
        rule = m.fire(*rx)
        trace.steps.append(
            TraceStep(len(trace.steps) + 1, rule, m.size, m.process() if record_processes else None, redex=rx)
        )
    trace.final = m.process()
    return trace


# ---------------------------------------------------------------- the duplicating-server family


def dupser(i: int) -> Process:
    """``!x_i(y). new z. x_{i+1}<z>. new w. x_{i+1}<w>. 0``"""
    nxt = f"x{i + 1}"
    return RepIn(f"x{i}", "y", New("z", Out(nxt, "z", New("w", Out(nxt, "w", NIL)))))


def server(n: int) -> Process:
    return RepIn(f"x{n}", "y", NIL)


def dupclient() -> Process:
    return New("y", Out("x0", "y", NIL))


def mulser(n: int) -> Process:
    """``new x1..x_{n-1}. (dupser_{n-1} | ... | dupser_0)``"""
    return new_all([f"x{i}" for i in range(1, n)], par_all(dupser(i) for i in reversed(range(n))))


def build_blowup_family(n: int) -> Process:
    """``new x0..xn. (ser | dupser_{n-1} | ... | dupser_0 | dupclient)``"""
    if n < 1:
        raise ValueError("n must be at least 1")
    comps = [server(n)] + [dupser(i) for i in reversed(range(n))] + [dupclient()]
    return new_all([f"x{i}" for i in range(n + 1)], par_all(comps))

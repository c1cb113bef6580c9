"""Random typable proof terms, generated top-down over the typing rules."""

from __future__ import annotations

import random
from dataclasses import dataclass

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
    PlusR1,
    PlusR2,
    ProofTerm,
    TensorL,
    TensorR,
    WithL1,
    WithL2,
    WithR,
    term_free_names,
)
from .sessiontypes import ONE, Bang, Lolli, One, Plus, SessionType, Tensor, With

Name = str


@dataclass(frozen=True)
class GenConfig:
    fuel: int = 6
    type_depth: int = 2
    p_cut: float = 0.35
    p_spawn: float = 0.5
    p_box: float = 0.5
    p_newest: float = 0.7
    p_bang_cut: float = 0.3


def random_type(rng: random.Random, depth: int) -> SessionType:
    if depth <= 0 or rng.random() < 0.3:
        return ONE
    k = rng.randrange(6)
    if k == 5:
        return Bang(random_type(rng, depth - 1))
    cls = (Tensor, Lolli, Plus, With, Tensor)[k]
    return cls(random_type(rng, depth - 1), random_type(rng, depth - 1))


class _Gen:
    """State of one generation run.

    Obligations ``theta`` are linear channels the term must consume; ``delta``
    maps multiplexor servers that may be spawned any number of times; ``gamma``
    maps auxiliary servers, each spawned at most once along any branch.
    """

    def __init__(self, rng: random.Random, cfg: GenConfig):
        self.rng = rng
        self.cfg = cfg
        self.counter = 0

    def name(self, base: str) -> Name:
        self.counter += 1
        return f"{base}{self.counter}"

    def split(self, items: list) -> tuple[list, list]:
        a, b = [], []
        for it in items:
            (a if self.rng.random() < 0.5 else b).append(it)
        return a, b

    # -------------------------------------------------------- main entry

    def gen(self, x: Name, a: SessionType, theta: list, delta: dict, gamma: dict, fuel: int) -> ProofTerm:
        rng, cfg = self.rng, self.cfg
        if fuel > 0:
            roll = rng.random()
            if roll < cfg.p_cut:
                return self.cut(x, a, theta, delta, gamma, fuel)
            if roll < cfg.p_cut + cfg.p_spawn and (delta or gamma):
                return self.spawn(x, a, theta, delta, gamma, fuel)
        # consume obligations before the goal when the goal rule needs an empty context
        eager = theta and rng.random() < cfg.p_newest
        must_left = eager or isinstance(a, One) or (isinstance(a, Bang) and any(not isinstance(t, Bang) for _, t in theta))
        if theta and (must_left or rng.random() < 0.5):
            candidates = theta
            if isinstance(a, Bang):
                candidates = [o for o in theta if not isinstance(o[1], Bang)]
            if not candidates:
                return self.right(x, a, theta, delta, gamma, fuel)
            # favour the newest obligation so cut partners tend to meet
            k = len(candidates) - 1 if rng.random() < cfg.p_newest else rng.randrange(len(candidates))
            return self.left(candidates[k], x, a, [o for o in theta if o is not candidates[k]], delta, gamma, fuel)
        return self.right(x, a, theta, delta, gamma, fuel)

    # -------------------------------------------------------- rules

    def right(self, x, a, theta, delta, gamma, fuel) -> ProofTerm:
        rng = self.rng
        f = fuel - 1
        match a:
            case One():
                return OneR(x)
            case Tensor(a1, a2):
                y = self.name("y")
                t1, t2 = self.split(theta)
                g1, g2 = self.split(sorted(gamma.items()))
                return TensorR(x, y, self.gen(y, a1, t1, delta, dict(g1), f), self.gen(x, a2, t2, delta, dict(g2), f))
            case Lolli(a1, a2):
                y = self.name("y")
                return LolliR(x, y, self.gen(x, a2, theta + [(y, a1)], delta, gamma, f))
            case With(a1, a2):
                return WithR(x, self.gen(x, a1, theta, delta, gamma, f), self.gen(x, a2, theta, delta, gamma, f))
            case Plus(a1, a2):
                if rng.random() < 0.5:
                    return PlusR1(x, a2, self.gen(x, a1, theta, delta, gamma, f))
                return PlusR2(x, a1, self.gen(x, a2, theta, delta, gamma, f))
            case Bang(b):
                return self.box(x, b, theta, f)
        raise TypeError(a)

    def box(self, x: Name, b: SessionType, aux: list, fuel: int) -> ProofTerm:
        """``!R`` whose auxiliary names are exactly the (banged) obligations ``aux``."""
        y = self.name("y")
        inner_theta = []
        spawns = []
        for n, t in aux:
            w = self.name("w")
            spawns.append((n, w))
            inner_theta.append((w, t.body))
        body = self.gen(y, b, inner_theta, {}, {}, fuel)
        for n, w in reversed(spawns):
            body = FlatBang(n, w, body)
        return BangR(x, y, tuple(n for n, _ in aux), body)

    def left(self, ob, x, a, theta, delta, gamma, fuel) -> ProofTerm:
        rng = self.rng
        f = fuel - 1
        z, b = ob
        match b:
            case One():
                return OneL(z, self.gen(x, a, theta, delta, gamma, f))
            case Tensor(b1, b2):
                u = self.name("u")
                return TensorL(z, u, self.gen(x, a, theta + [(u, b1), (z, b2)], delta, gamma, f))
            case Lolli(b1, b2):
                u = self.name("u")
                t1, t2 = self.split(theta)
                g1, g2 = self.split(sorted(gamma.items()))
                return LolliL(
                    z, u, self.gen(u, b1, t1, delta, dict(g1), f), self.gen(x, a, t2 + [(z, b2)], delta, dict(g2), f)
                )
            case With(b1, b2):
                if rng.random() < 0.5:
                    return WithL1(z, b2, self.gen(x, a, theta + [(z, b1)], delta, gamma, f))
                return WithL2(z, b1, self.gen(x, a, theta + [(z, b2)], delta, gamma, f))
            case Plus(b1, b2):
                return PlusL(
                    z,
                    self.gen(x, a, theta + [(z, b1)], delta, gamma, f),
                    self.gen(x, a, theta + [(z, b2)], delta, gamma, f),
                )
            case Bang(c):
                if rng.random() < 0.5:
                    body = self.gen(x, a, theta, {**delta, z: c}, gamma, f)
                    cls = BangLSharp
                else:
                    body = self.gen(x, a, theta, delta, {**gamma, z: c}, f)
                    cls = BangLBang
                return cls(z, body, None if z in term_free_names(body) else c)
        raise TypeError(b)

    def spawn(self, x, a, theta, delta, gamma, fuel) -> ProofTerm:
        rng = self.rng
        w = self.name("s")
        pool = [("#", k) for k in sorted(delta)] + [("!", k) for k in sorted(gamma)]
        kind, s = pool[rng.randrange(len(pool))]
        if kind == "#":
            return FlatSharp(s, w, self.gen(x, a, theta + [(w, delta[s])], delta, gamma, fuel - 1))
        rest = {k: v for k, v in gamma.items() if k != s}
        return FlatBang(s, w, self.gen(x, a, theta + [(w, gamma[s])], delta, rest, fuel - 1))

    def cut(self, x, a, theta, delta, gamma, fuel) -> ProofTerm:
        rng, cfg = self.rng, self.cfg
        f = fuel - 1
        c = random_type(rng, cfg.type_depth)
        if rng.random() < cfg.p_bang_cut:
            c = Bang(random_type(rng, cfg.type_depth - 1))
        y = self.name("c")
        if rng.random() < cfg.p_box:
            w = self.name("w")
            box = self.gen(w, c, [], {}, {}, f // 2)
            if rng.random() < 0.5:
                return CutSharp(y, w, box, self.gen(x, a, theta, {**delta, y: c}, gamma, f))
            return CutBang(y, w, box, self.gen(x, a, theta, delta, {**gamma, y: c}, f))
        t1, t2 = self.split(theta)
        g1, g2 = self.split(sorted(gamma.items()))
        if isinstance(c, Bang):
            # a !-typed provider must have only banged obligations
            t2 += [o for o in t1 if not isinstance(o[1], Bang)]
            t1 = [o for o in t1 if isinstance(o[1], Bang)]
        return Cut(y, self.gen(y, c, t1, delta, dict(g1), f), self.gen(x, a, t2 + [(y, c)], delta, dict(g2), f))


def generate(seed: int, cfg: GenConfig = GenConfig()) -> ProofTerm:
    """A random term offering ``out`` at a random type, typable by construction."""
    rng = random.Random(seed)
    g = _Gen(rng, cfg)
    a = random_type(rng, cfg.type_depth)
    return g.gen("out", a, [], {}, {}, cfg.fuel)

"""Named example terms: MULT, DER, the credit-card session, and the duplicating-server script."""

from __future__ import annotations

from .proofterm import (
    BangLSharp,
    BangR,
    Cut,
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
    WithR,
)
from .sessiontypes import EMPTY, ONE, Bang, Context, Judgment, Lolli, Plus, SessionType, Tensor, With


def tensor_power(k: int) -> SessionType:
    """``1 * ... * 1`` with ``k >= 1`` factors."""
    a = ONE
    for _ in range(k - 1):
        a = Tensor(ONE, a)
    return a


def mult(n: int) -> ProofTerm:
    """MULT with ``n + 2`` factors, exactly as displayed: the payloads are fresh units."""
    payloads = ["x"] + [f"x{i}" for i in range(1, n + 1)]
    body: ProofTerm = OneR("y")
    for p in reversed(payloads):
        body = TensorR("y", p, OneR(p), body)
    return BangLSharp("x", body, ONE)


def mult_judgment(n: int) -> Judgment:
    return Judgment(EMPTY, EMPTY, Context.of(x=Bang(ONE)), "y", tensor_power(n + 2))


def mult_spawning(n: int) -> ProofTerm:
    """MULT variant where every factor is a session opened on the server ``x``."""
    body: ProofTerm = FlatSharp("x", f"z{n + 1}", OneL(f"z{n + 1}", OneR("y")))
    for i in reversed(range(n + 1)):
        p = f"p{i}"
        body = TensorR("y", p, FlatSharp("x", f"z{i}", OneL(f"z{i}", OneR(p))), body)
    return BangLSharp("x", body)


def unit_server(chan: str = "x") -> ProofTerm:
    """``!x(w). 0`` typed ``x : !1``."""
    return BangR(chan, "w", (), OneR("w"))


def with_unit_server(d: ProofTerm, chan: str = "x") -> ProofTerm:
    return Cut(chan, unit_server(chan), d)


def der_one() -> ProofTerm:
    """DER for the unit type: ``new z. x!(z)`` typed ``x : !1 |- y : 1``."""
    return BangLSharp("x", FlatSharp("x", "z", OneL("z", OneR("y"))))


def der_judgment() -> Judgment:
    return Judgment(EMPTY, EMPTY, Context.of(x=Bang(ONE)), "y", ONE)


# ---------------------------------------------------------------- credit card, with unit pseudo-types

RECEIPT = Tensor(ONE, Tensor(ONE, ONE))
CLIENT_TYPE = Lolli(ONE, Lolli(ONE, Plus(RECEIPT, ONE)))
CHECK_TYPE = Lolli(ONE, Lolli(ONE, Plus(ONE, ONE)))
BANK_TYPE = With(CHECK_TYPE, ONE)


def _shop_after_request(y: str) -> ProofTerm:
    """Forward a number and a code on ``y`` and branch on the answer."""
    ok = OneL(y, PlusR1("x", ONE, TensorR("x", "mp", OneR("mp"), TensorR("x", "rp", OneR("rp"), OneR("x")))))
    ko = OneL(y, PlusR2("x", RECEIPT, OneR("x")))
    answer = PlusL(y, ok, ko)
    return LolliL(y, "nm2", OneR("nm2"), LolliL(y, "cd2", OneR("cd2"), answer))


def shop() -> ProofTerm:
    """The shop ``P``: uses ``y : BANK_TYPE`` linearly and offers ``x : CLIENT_TYPE``."""
    inner = WithL1("y", ONE, _shop_after_request("y"))
    return LolliR("x", "nm1", LolliR("x", "cd1", OneL("nm1", OneL("cd1", inner))))


def bank() -> ProofTerm:
    """The bank ``Q`` offering ``y : BANK_TYPE``."""
    check = LolliR("y", "a", LolliR("y", "b", OneL("a", OneL("b", PlusR1("y", ONE, OneR("y"))))))
    return WithR("y", check, OneR("y"))


def credit_card() -> ProofTerm:
    """``new y. (P | Q)``."""
    return Cut("y", bank(), shop())


def persistent_bank() -> ProofTerm:
    """``!z(y). Q`` typed ``z : !BANK_TYPE``."""
    return BangR("z", "y", (), bank())


def spawning_shop() -> ProofTerm:
    """The shop that opens its bank session on the server ``z`` first."""
    inner = FlatSharp("z", "y", WithL1("y", ONE, _shop_after_request("y")))
    return BangLSharp("z", LolliR("x", "nm1", LolliR("x", "cd1", OneL("nm1", OneL("cd1", inner)))))


def credit_card_persistent() -> ProofTerm:
    """``new z. (S | !z(y). Q)``."""
    return Cut("z", persistent_bank(), spawning_shop())


def credit_card_judgment() -> Judgment:
    return Judgment(EMPTY, EMPTY, EMPTY, "x", CLIENT_TYPE)


DUPSER_SCRIPT = """\
# the body of dupser uses the auxiliary server x1 twice
(bangR x0 y (x1) (flat! x1 z (1L z (flat! x1 w (1L w (1R y))))))
G: {} ; D: {} ; T: {x1: !1} |- x0 : !1
"""


def bang_chain(n: int) -> ProofTerm:
    """Servers stacked through ``n`` auxiliary layers, a typable cousin of the blowup family.

    Server ``x_i`` opens one session on ``x_{i+1}``; the client opens one on ``x0``.
    """
    term: ProofTerm = BangLSharp("x0", FlatSharp("x0", "c", OneL("c", OneR("out"))))
    for i in range(n + 1):
        if i == n:
            srv = BangR(f"x{i}", "y", (), OneR("y"))
        else:
            srv = BangR(f"x{i}", "y", (f"x{i + 1}",), FlatBang(f"x{i + 1}", "z", OneL("z", OneR("y"))))
        term = Cut(f"x{i}", srv, term)
    return term


def tensor_consumer(k: int, chan: str = "y", out: str = "done") -> ProofTerm:
    """Receive and discard ``k - 1`` units on ``chan : 1 * ... * 1`` then close it."""
    body: ProofTerm = OneL(chan, OneR(out))
    for i in reversed(range(k - 1)):
        body = TensorL(chan, f"u{i}", OneL(f"u{i}", body))
    return body


def with_consumer(d: ProofTerm, k: int, chan: str = "y") -> ProofTerm:
    """Close ``d : chan : 1 * ... * 1`` (``k`` factors) with a consumer."""
    return Cut(chan, d, tensor_consumer(k, chan))


def mult_closed(n: int, spawning: bool = True) -> ProofTerm:
    """MULT with its server and a consumer: a closed term of type ``done : 1``."""
    d = mult_spawning(n) if spawning else mult(n)
    return with_consumer(with_unit_server(d), n + 2)


def shop_client(accept: bool = True) -> ProofTerm:
    """Send a number and a code on ``x : CLIENT_TYPE`` and consume the answer."""
    ok = TensorL("x", "mp", TensorL("x", "rp", OneL("mp", OneL("rp", OneL("x", OneR("done"))))))
    ko = OneL("x", OneR("done"))
    return LolliL("x", "n", OneR("n"), LolliL("x", "c", OneR("c"), PlusL("x", ok, ko)))


def credit_card_session(persistent: bool = False) -> ProofTerm:
    """The shop and bank composition driven by a client, closed at ``done : 1``."""
    return Cut("x", credit_card_persistent() if persistent else credit_card(), shop_client())

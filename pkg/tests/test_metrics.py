import pytest
from hypothesis import given

from softpi import metrics
from softpi.library import der_one, mult
from softpi.metrics import bde_term, bound_polynomial, dupf, foc, report, size_term, wei, weip
from softpi.process import NIL, In, New, Par, RepIn, bde_process, size
from softpi.proofterm import BangLSharp, BangR, CutBang, CutSharp, FlatBang, FlatSharp, OneR, TensorR, extract
from strategies import typed_terms

BOX = BangR("x", "y", (), OneR("y"))


def spawns(chan, k, tail=None):
    d = tail or OneR("z")
    for i in range(k):
        d = FlatSharp(chan, f"s{i}", d)
    return d


def test_bde_process_examples():
    assert bde_process(RepIn("x", "y", RepIn("z", "w", NIL))) == 2
    assert bde_process(New("x", In("y", "z", NIL))) == 0
    assert bde_process(Par(RepIn("x", "y", NIL), NIL)) == 1


def test_bde_term_examples():
    assert bde_term(OneR("x")) == 0
    assert bde_term(BOX) == 1
    assert bde_term(CutSharp("x", "y", OneR("y"), OneR("z"))) == 1


def test_foc_examples():
    assert foc("w", OneR("x")) == 0
    # a spawn counts on the server channel it requests
    assert foc("x", FlatSharp("x", "w", OneR("z"))) == 1
    left = FlatBang("w", "a", OneR("y"))
    right = spawns("x", 2)
    assert (foc("x", right), foc("w", left), foc("w", right)) == (2, 1, 0)
    assert foc("w", CutBang("x", "y", left, right)) == 2


def test_dupf_examples():
    assert dupf(OneR("x")) == 0
    body = spawns("x", 3)
    assert (foc("x", body), dupf(body)) == (3, 0)
    assert dupf(BangLSharp("x", body)) == 3
    l, r = BangLSharp("a", spawns("a", 2)), BangLSharp("b", spawns("b", 1))
    assert dupf(TensorR("o", "p", l, r)) == max(dupf(l), dupf(r))


def test_weip_examples():
    assert weip(5, OneR("x")) == 0
    assert weip(3, BOX) == 3


def test_weip_exponential_cut_recursion(monkeypatch):
    l, r = OneR("l"), OneR("r")
    monkeypatch.setattr(metrics, "foc", lambda w, d: 2 if (w, d) == ("x", r) else 0)
    monkeypatch.setattr(metrics, "weip", lambda n, d: {l: 3, r: 1}[d])
    assert weip.__wrapped__(2, CutSharp("x", "y", l, r)) == 7


def test_wei_and_size_examples():
    assert wei(OneR("x")) == 0
    assert wei(BOX) == 0
    assert size_term(OneR("x")) == 0
    assert size_term(BOX) == 1


def test_report_examples():
    r = report(OneR("x"))
    assert (r.box_depth, r.dup_factor, r.weight, r.term_size, r.per_channel_foc) == (0, 0, 0, 0, {})


def test_golden_records():
    # hand-evaluated against the definitional tables
    r = report(mult(2))
    assert (r.box_depth, r.dup_factor, r.weight, r.term_size) == (0, 0, 3, 3)
    r = report(der_one())
    assert (r.box_depth, r.dup_factor, r.weight, r.term_size) == (0, 1, 1, 1)


def test_bound_polynomial_examples():
    assert bound_polynomial(0, 1) == 2
    assert bound_polynomial(0, 0) == 0
    assert bound_polynomial(2, 3) == 324


@given(typed_terms())
def test_weip_monotone_in_n(d):
    ws = [weip(n, d) for n in range(6)]
    assert ws == sorted(ws)


@given(typed_terms())
def test_process_vs_term(d):
    assert bde_term(d) == bde_process(extract(d))
    assert size_term(d) == size(extract(d))


@given(typed_terms())
def test_dupf_bounded_by_size(d):
    assert dupf(d) <= size_term(d)


@pytest.mark.parametrize("bd,s", [(0, 2), (1, 3), (3, 2)])
def test_bound_polynomial_formula(bd, s):
    q = s * s ** (bd + 1)
    assert bound_polynomial(bd, s) == q + s * q

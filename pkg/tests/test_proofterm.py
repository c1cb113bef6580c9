import pytest
from hypothesis import given, settings

from softpi.errors import AuxiliaryNonlinear, ContextMismatch, DeclaredMismatch, ParseError
from softpi.library import DUPSER_SCRIPT, mult, mult_judgment
from softpi.metrics import dupf, weip
from softpi.process import NIL, In, New, Out, Par, RepIn, alpha_eq
from softpi.proofterm import (
    BangR,
    CutSharp,
    FlatBang,
    FlatSharp,
    OneL,
    OneR,
    TensorL,
    check,
    extract,
    judgment_of,
    lift,
    parse_term,
    parse_thm,
    synthesize,
    term_text,
    thm_text,
)
from softpi.sessiontypes import EMPTY, ONE, Bang, Context, Judgment
from strategies import typed_terms


def test_extract_examples():
    assert extract(OneR("x")) == NIL
    d, e = OneR("y"), OneR("z")
    assert extract(CutSharp("x", "y", d, e)) == New("x", Par(RepIn("x", "y", extract(d)), extract(e)))
    assert extract(FlatBang("x", "y", e)) == New("y", Out("x", "y", extract(e)))


def test_synthesize_examples():
    assert synthesize(OneR("x")).judgment == Judgment(EMPTY, EMPTY, EMPTY, "x", ONE)
    assert judgment_of(BangR("x", "y", (), OneR("y"))) == Judgment(EMPTY, EMPTY, EMPTY, "x", Bang(ONE))


def test_cut_sharp_needs_closed_box():
    left = OneL("u", OneR("y"))
    with pytest.raises(ContextMismatch):
        judgment_of(CutSharp("x", "y", left, OneR("z")))


def test_check_examples():
    check(OneR("x"), Judgment(EMPTY, Context.of(w=ONE), EMPTY, "x", ONE))
    with pytest.raises(DeclaredMismatch):
        check(OneR("x"), Judgment(EMPTY, EMPTY, Context.of(w=ONE), "x", ONE))
    check(mult(2), mult_judgment(2))


def test_dupser_script_is_rejected():
    d, declared = parse_thm(DUPSER_SCRIPT)
    with pytest.raises(AuxiliaryNonlinear):
        check(d, declared)


def test_lift_examples():
    assert lift(OneR("x")) == OneR("x")
    d = OneL("z", OneR("y"))
    assert lift(FlatBang("x", "z", d)) == FlatSharp("x", "z", lift(d))


def test_parse_error_is_reported():
    with pytest.raises(ParseError):
        parse_term("(tensR x")


@given(typed_terms())
def test_term_text_roundtrip(d):
    assert parse_term(term_text(d)) == d


@given(typed_terms())
def test_thm_roundtrip_checks(d):
    j = judgment_of(d)
    e, declared = parse_thm(thm_text(d, j))
    assert check(e, declared).judgment == j


@given(typed_terms())
def test_weakening_with_fresh_multiplexor_names(d):
    j = judgment_of(d)
    wider = Judgment(j.aux, j.mux.extend({"fresh_w": ONE}), j.lin, j.subject, j.offered)
    assert check(d, wider).judgment == j


@settings(max_examples=60)
@given(typed_terms())
def test_lift_moves_auxiliary_into_multiplexor(d):
    j = judgment_of(d)
    lj = judgment_of(lift(d))
    assert lj.aux == EMPTY
    assert dict(lj.mux) == {**dict(j.mux), **dict(j.aux)}
    assert (lj.lin, lj.subject, lj.offered) == (j.lin, j.subject, j.offered)
    assert alpha_eq(extract(lift(d)), extract(d))
    assert dupf(lift(d)) == dupf(d)
    assert all(weip(n, lift(d)) == weip(n, d) for n in range(4))


def test_extract_input_prefix():
    assert extract(TensorL("x", "y", OneR("z"))) == In("x", "y", NIL)

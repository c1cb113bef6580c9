import random

from hypothesis import given, settings
from hypothesis import strategies as st

from softpi.process import (
    NIL,
    Case,
    In,
    New,
    Out,
    Par,
    RepIn,
    SelL,
    alpha_eq,
    canonical_form,
    congruence_step,
    free_names,
    node_count,
    parse_process,
    size,
    struct_congruent,
    substitute,
    to_text,
)
from softpi.library import mult
from softpi.proofterm import extract
from strategies import processes

P = Out("x", "y", NIL)
Q = In("z", "w", NIL)


def test_free_names_examples():
    assert free_names(NIL) == frozenset()
    assert free_names(New("x", Out("x", "y", NIL))) == {"y"}
    assert free_names(Case("x", Out("y", "z", NIL), NIL)) == {"x", "y", "z"}


def test_substitute_examples():
    assert substitute(Out("x", "y", NIL), "y", "z") == Out("x", "z", NIL)
    captured = substitute(New("z", Out("x", "z", NIL)), "x", "z")
    assert free_names(captured) == {"z"}
    assert alpha_eq(substitute(P, "w", "w"), P)


def test_alpha_eq_examples():
    assert alpha_eq(New("x", In("x", "y", NIL)), New("a", In("a", "b", NIL)))
    assert not alpha_eq(In("x", "y", NIL), In("z", "y", NIL))


def test_size_examples():
    assert size(NIL) == 0
    assert size(New("a", New("b", P))) == size(P)
    assert size(extract(mult(2))) == 3


def test_canonical_form_examples():
    assert canonical_form(Par(P, NIL)) == canonical_form(P)
    assert canonical_form(Par(P, Q)) == canonical_form(Par(Q, P))
    assert struct_congruent(Par(New("v", In("v", "u", NIL)), Q), New("v", Par(In("v", "u", NIL), Q)))


def test_struct_congruent_examples():
    body = Par(Out("x", "y", NIL), In("y", "x", NIL))
    assert struct_congruent(New("x", New("y", body)), New("y", New("x", body)))
    assert not struct_congruent(In("x", "y", NIL), Out("x", "y", NIL))


def test_parse_roundtrip_example():
    text = "new x. (!x?(y). y!(z). 0 | case x { inl: 0 ; inr: x.inl. 0 })"
    p = parse_process(text)
    assert parse_process(to_text(p)) == p


@given(processes())
def test_parse_print_roundtrip(p):
    assert parse_process(to_text(p)) == p


@given(processes(), st.sampled_from("abcxyz"))
def test_identity_substitution(p, w):
    assert alpha_eq(substitute(p, w, w), p)


@given(processes(), st.sampled_from("abcxyz"), st.sampled_from("abcxyz"))
def test_substitution_free_names(p, a, b):
    fn = free_names(p)
    expected = (fn - {a}) | {b} if a in fn else fn
    assert free_names(substitute(p, a, b)) == expected


@given(processes())
def test_canonical_form_idempotent_and_small(p):
    c = canonical_form(p)
    assert canonical_form(c) == c
    assert struct_congruent(c, p)
    assert node_count(c) <= (size(p) + 1) ** 2


@settings(max_examples=60)
@given(processes(), st.integers(0, 2**32))
def test_congruence_moves_preserve_size_and_class(p, seed):
    rng = random.Random(seed)
    q = p
    for _ in range(10):
        q = congruence_step(q, rng)
        assert size(q) == size(p)
    assert struct_congruent(p, q)


@given(processes())
def test_size_ignores_restriction_and_nil(p):
    assert size(New("fresh", Par(p, NIL))) == size(p)


def test_replicated_input_size():
    assert size(RepIn("x", "y", SelL("y", NIL))) == 2

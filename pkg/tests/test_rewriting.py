import pytest
from hypothesis import given, settings

from softpi.errors import NotTypable, RedexNotFound
from softpi.library import mult_closed
from softpi.metrics import wei
from softpi.process import New, Par, RepIn, prenex, struct_congruent
from softpi.proofterm import (
    BangLBang,
    BangR,
    Cut,
    CutBang,
    CutSharp,
    FlatBang,
    FlatSharp,
    OneL,
    OneR,
    TensorL,
    TensorR,
    WithL1,
    WithR,
    extract,
    judgment_of,
)
from softpi.reducer import redexes
from softpi.rewriting import (
    COMPUTATIONAL,
    EQUIVALENCE,
    SHIFT,
    RULES,
    all_steps,
    computational_rule_of,
    computational_steps,
    equivalence_steps,
    reference_reduct,
    run_weighted_trace,
    shift_steps,
    subject_reduce,
)
from softpi.sessiontypes import ONE, Tensor
from checks import sr_problems, step_problems
from strategies import typed_terms

TENSOR_CUT = Cut("x", TensorR("x", "y", OneR("y"), OneR("x")), TensorL("x", "y", OneL("y", OneL("x", OneR("z")))))
SPAWN = FlatSharp("x", "a", OneL("a", OneR("z")))


def test_tensor_computational_step():
    (step,) = computational_steps(TENSOR_CUT)
    f, g = TENSOR_CUT.left.left, TENSOR_CUT.left.right
    h = TENSOR_CUT.right.body
    assert step.rule_name == "(cut/⊗R/⊗L)"
    assert step.after == Cut("y", f, Cut("x", g, h))


def test_with_computational_step():
    f = OneR("x")
    g = TensorR("x", "a", OneR("a"), OneR("x"))
    h = OneL("x", OneR("z"))
    (step,) = computational_steps(Cut("x", WithR("x", f, g), WithL1("x", Tensor(ONE, ONE), h)))
    assert step.rule_name == "(cut/&R/&L₁)"
    assert step.after == Cut("x", f, h)


def test_no_steps_on_axiom():
    assert computational_steps(OneR("x")) == []
    assert shift_steps(OneR("x")) == []


def test_shift_without_auxiliary_names():
    f, g = OneR("y"), FlatBang("x", "u", OneL("u", OneR("z")))
    (step,) = shift_steps(Cut("x", BangR("x", "y", (), f), BangLBang("x", g)))
    assert step.after == CutBang("x", "y", f, g)


def test_shift_rebinds_auxiliary_names():
    f = FlatBang("x1", "v", OneL("v", OneR("y")))
    g = FlatBang("x", "u", OneL("u", OneR("z")))
    (step,) = shift_steps(Cut("x", BangR("x", "y", ("x1",), f), BangLBang("x", g)))
    assert step.after == BangLBang("x1", CutBang("x", "y", f, g))


def test_unused_exponential_cut_is_dropped():
    e = OneR("z")
    steps = [s for s in equivalence_steps(CutSharp("x", "y", OneR("y"), e)) if s.rule_name == "(cut#/−/−₀)"]
    assert [s.after for s in steps] == [e]


def test_exponential_cut_duplicates_over_cut():
    f = OneR("y")
    g = FlatSharp("x", "a", OneL("a", OneR("c")))
    h = OneL("c", FlatSharp("x", "b", OneL("b", OneR("z"))))
    d = CutSharp("x", "y", f, Cut("c", g, h))
    want = Cut("c", CutSharp("x", "y", f, g), CutSharp("x", "y", f, h))
    assert any(s.after == want for s in equivalence_steps(d))
    assert wei(want) == wei(d)


def test_subject_reduce_tensor_case():
    d = TENSOR_CUT
    (rx,) = redexes(prenex(extract(d)))
    res = subject_reduce(d, rx)
    assert computational_rule_of(res.script) == "(cut/⊗R/⊗L)"
    assert sr_problems(d, rx) == []


def test_subject_reduce_spawn_case():
    body = OneR("y")
    d = CutSharp("x", "y", body, SPAWN)
    (rx,) = redexes(prenex(extract(d)))
    res = subject_reduce(d, rx)
    assert computational_rule_of(res.script) == "(cut#/−/♭#)"
    p1 = extract(body)
    q2 = extract(SPAWN.body)
    expected = New("x", Par(RepIn("x", "y", p1), New("a", Par(p1, q2))))
    assert struct_congruent(extract(res.target), expected)
    assert struct_congruent(extract(res.target), reference_reduct(d, rx))


def test_subject_reduce_rejects_bad_redex():
    with pytest.raises(RedexNotFound):
        subject_reduce(TENSOR_CUT, (5, 7))


def test_subject_reduce_rejects_untypable():
    with pytest.raises(NotTypable):
        subject_reduce(Cut("x", OneR("y"), OneR("z")), (0, 1))


def test_weighted_trace_examples():
    assert run_weighted_trace(OneR("x")).length == 0
    t = run_weighted_trace(mult_closed(2))
    weights = [t.initial_wei] + [s.wei for s in t.steps]
    assert t.terminated and t.length > 0
    assert all(a > b for a, b in zip(weights, weights[1:]))
    assert run_weighted_trace(mult_closed(2), max_steps=0).length == 0


def test_rule_registry():
    assert {r.kind for r in RULES} == {COMPUTATIONAL, SHIFT, EQUIVALENCE}
    assert sum(r.kind == COMPUTATIONAL for r in RULES) == 8
    assert sum(r.kind == SHIFT for r in RULES) == 2
    assert len({(r.name, r.direction) for r in RULES}) == len(RULES)


@settings(max_examples=40, deadline=None)
@given(typed_terms())
def test_subject_reduction_on_every_redex(d):
    for rx in redexes(prenex(extract(d))):
        assert sr_problems(d, rx) == []


@settings(max_examples=40, deadline=None)
@given(typed_terms())
def test_rewrite_steps_respect_weights_and_types(d):
    for step in all_steps(d):
        assert step_problems(step) == []
        assert judgment_of(step.after).offered == judgment_of(d).offered


@settings(max_examples=30, deadline=None)
@given(typed_terms())
def test_trace_length_bounded_by_initial_weight(d):
    t = run_weighted_trace(d)
    assert t.terminated
    assert t.length <= t.initial_wei

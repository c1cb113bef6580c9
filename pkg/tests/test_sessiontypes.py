from hypothesis import given

from softpi.sessiontypes import (
    EMPTY,
    ONE,
    Bang,
    Context,
    Judgment,
    Lolli,
    Tensor,
    judgment_depth,
    parse_type,
    type_depth,
    type_text,
)
from strategies import session_types


def test_type_depth_examples():
    assert type_depth(ONE) == 0
    assert type_depth(Bang(ONE)) == 1
    assert type_depth(Lolli(Bang(Bang(ONE)), Tensor(ONE, Bang(ONE)))) == 2


def test_judgment_depth_examples():
    assert judgment_depth(Judgment(EMPTY, EMPTY, EMPTY, "x", ONE)) == 0
    assert judgment_depth(Judgment(EMPTY, EMPTY, Context.of(x=Bang(ONE)), "y", ONE)) == 1
    assert judgment_depth(Judgment(Context.of(y=ONE), EMPTY, EMPTY, "x", Bang(Bang(ONE)))) == 2


def test_context_equality_ignores_order():
    assert Context.of({"a": ONE, "b": Bang(ONE)}) == Context.of({"b": Bang(ONE), "a": ONE})


@given(session_types())
def test_type_text_roundtrip(a):
    assert parse_type(type_text(a)) == a


@given(session_types())
def test_bang_adds_one_level(a):
    assert type_depth(Bang(a)) == type_depth(a) + 1

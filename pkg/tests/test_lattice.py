import itertools

import pytest
from hypothesis import given, strategies as st

from pbpo_trs.lattice import (BOTTOM, TOP, Signature, base, format_label, join, leq, meet,
                              parse_label)

UNIVERSE = [BOTTOM, TOP, base("a"), base("b"), base("f"), base(1), base(2)]
labels = st.sampled_from(UNIVERSE)


def test_leq_examples():
    assert leq(base("f"), base("f"))
    assert not leq(base("a"), base("b"))
    assert leq(BOTTOM, base("g")) and leq(base("g"), TOP)
    assert not leq(TOP, base("g")) and not leq(base("g"), BOTTOM)


def test_symbols_and_integers_are_distinct():
    assert not leq(base(1), base("a")) and base(1) != base("a")


def test_join_examples():
    assert join([]) == BOTTOM
    assert join([base("a"), BOTTOM]) == base("a")
    assert join([base("a"), base("b")]) == TOP
    assert join([base("a")]) == base("a")


def test_meet_examples():
    assert meet([]) == TOP
    assert meet([base("a"), TOP]) == base("a")
    assert meet([base("a"), base("b")]) == BOTTOM


def test_leq_is_a_partial_order():
    for a in UNIVERSE:
        assert leq(a, a)
    for a, b in itertools.product(UNIVERSE, repeat=2):
        if leq(a, b) and leq(b, a):
            assert a == b
    for a, b, c in itertools.product(UNIVERSE, repeat=3):
        if leq(a, b) and leq(b, c):
            assert leq(a, c)


@given(st.lists(labels, max_size=4))
def test_join_is_least_upper_bound(s):
    j = join(s)
    assert all(leq(x, j) for x in s)
    for u in UNIVERSE:
        if all(leq(x, u) for x in s):
            assert leq(j, u)


@given(st.lists(labels, max_size=4))
def test_meet_is_greatest_lower_bound(s):
    m = meet(s)
    assert all(leq(m, x) for x in s)
    for u in UNIVERSE:
        if all(leq(u, x) for x in s):
            assert leq(u, m)


@given(labels, labels)
def test_absorption(a, b):
    assert meet([a, join([a, b])]) == a
    assert join([a, meet([a, b])]) == a


@pytest.mark.parametrize("label,text", [(BOTTOM, "_|_"), (TOP, "^T^"), (base("f"), "f"), (base(3), "3")])
def test_label_text_round_trip(label, text):
    assert format_label(label) == text
    assert parse_label(text) == label


def test_signature_rejects_numeric_and_negative():
    with pytest.raises(ValueError):
        Signature({"1": 0})
    with pytest.raises(ValueError):
        Signature({"f": -1})
    sig = Signature({"f": 2, "a": 0})
    assert sig["f"] == 2 and sig.arity_of(base("f")) == 2
    assert sig.arity_of(BOTTOM) is None and sig.arity_of(base(1)) is None


def test_label_is_a_value():
    assert hash(base("a")) == hash(base("a"))
    assert len({base("a"), base("a"), TOP}) == 2

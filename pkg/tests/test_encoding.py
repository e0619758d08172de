import random

import pytest
from hypothesis import given, strategies as st

from conftest import mk
from pbpo_trs.catops import SpanResult, verify_pullback_universal
from pbpo_trs.encoding import (EncodingError, decode_term, encode_rule, encode_system, encode_term,
                               interface_graph, lower_context_closure, positions_in_graph,
                               upper_context_closure)
from pbpo_trs.engine import find_matches
from pbpo_trs.fixtures import THREE_ZONE_SIG, confluence_trs, rule_encoding_trs, three_zone_graph
from pbpo_trs.graph import RootedGraph, enumerate_morphisms, is_mono
from pbpo_trs.lattice import TOP, Signature
from pbpo_trs.randgen import DEFAULT_SIGNATURE, NameSupply, random_context, random_rule, random_term
from pbpo_trs.terms import (Trs, Var, apply_substitution, hole_position, parse_term, parse_trs,
                            plug, rename_canonically, variables)

SIG = Signature({"f": 3, "g": 1, "h": 1, "a": 0, "b": 0})


def same(g, h):
    """Identical element names, endpoints and labels."""
    return g == h


FGAHY = mk({"eps": "f", "1": "g", "2": "a", "3": "h", "x": "_", "y": "_"},
           [("eps", "1", 1), ("eps", "2", 2), ("eps", "3", 3), ("1", "x", 1), ("3", "y", 1)])


def test_encode_constant():
    enc = encode_term(SIG, parse_term("a", SIG))
    assert same(enc.graph, mk({"eps": "a"})) and enc.root == "eps"


def test_encode_example_term():
    enc = encode_term(SIG, parse_term("f(g(x), a, h(y))", SIG))
    assert same(enc.graph, FGAHY)
    assert enc.root == "eps"
    assert enc.position_of["y"] == (3, 1)
    assert set(enc.variable_heads) == {"x", "y"}


def test_encode_variable():
    enc = encode_term(SIG, Var("x"))
    assert same(enc.graph, mk({"x": "_"})) and enc.root == "x"


def test_encode_long_positions_stay_unambiguous():
    sig = Signature({"k": 11, "a": 0})
    args = ", ".join(["a"] * 10 + ["k(" + ", ".join(["a"] * 11) + ")"])
    enc = encode_term(sig, parse_term(f"k({args})", sig))
    names = list(enc.graph.vertices)
    assert len(set(names)) == len(names) == 1 + 10 + 1 + 11
    assert decode_term(enc.graph, sig) == parse_term(f"k({args})", sig)


def test_decode_examples():
    assert decode_term(FGAHY, SIG) == parse_term("f(g(x), a, h(y))", SIG)
    assert decode_term(FGAHY.with_vertex_labels({"2": TOP})) is None
    assert decode_term(three_zone_graph(), THREE_ZONE_SIG) is None


def test_decode_rejects_wrong_arity_and_labels():
    bad_arity = mk({"eps": "f", "1": "a"}, [("eps", "1", 1)])
    assert decode_term(bad_arity, SIG) is None
    bad_edge = mk({"eps": "g", "1": "a"}, [("eps", "1", 2)])
    assert decode_term(bad_edge, SIG) is None


def test_decode_renames_unusable_vertex_names():
    g = mk({"eps": "g", "1": "_"}, [("eps", "1", 1)])
    assert decode_term(g, SIG) == parse_term("g(x1)", SIG)


def test_upper_closure():
    single = RootedGraph(mk({"r": "a"}), "r")
    up = upper_context_closure(single)
    assert same(up.graph, mk({"r": "a", "C": "T"}, [("C", "r", "T"), ("C", "C", "T")]))
    assert up.root == "r"
    with pytest.raises(EncodingError):
        upper_context_closure(up)
    twice = upper_context_closure(up, name="C2")
    assert len(twice.graph.vertices) == 3 and twice.graph != up.graph


def test_lower_closure():
    single = RootedGraph(mk({"x": "_"}), "x")
    assert lower_context_closure(single, set()).graph == single.graph
    low = lower_context_closure(single, {"x"})
    assert same(low.graph, mk({"x": "T", "x'": "T"}, [("x", "x'", "T"), ("x'", "x'", "T")]))


def test_full_context_closure_of_example_term():
    enc = encode_term(SIG, parse_term("f(g(x), a, h(y))", SIG))
    closed = upper_context_closure(lower_context_closure(enc.rooted, {"x", "y"}))
    expected = mk({"C": "T", "eps": "f", "1": "g", "2": "a", "3": "h", "x": "T", "y": "T",
                   "x'": "T", "y'": "T"},
                  [("C", "C", "T"), ("C", "eps", "T"), ("eps", "1", 1), ("eps", "2", 2), ("eps", "3", 3),
                   ("1", "x", 1), ("3", "y", 1), ("x", "x'", "T"), ("x'", "x'", "T"),
                   ("y", "y'", "T"), ("y'", "y'", "T")])
    assert same(closed.graph, expected)


def test_interface_graph():
    sig = rule_encoding_trs().signature
    assert same(interface_graph(parse_term("h(g(y), a)", sig)).graph, mk({"eps": "_", "y": "_"}))
    assert same(interface_graph(parse_term("a", sig)).graph, mk({"eps": "_"}))
    assert same(interface_graph(Var("x")).graph, mk({"eps": "_", "x": "_"}))


def test_rule_encoding_example():
    trs = rule_encoding_trs()
    er = encode_rule(trs.signature, trs.rules[0])
    rule = er.rule
    L = mk({"eps": "f", "x": "_", "2": "g", "21": "b", "y": "_"},
           [("eps", "x", 1), ("eps", "2", 2), ("eps", "y", 3), ("2", "21", 1)])
    K = mk({"eps": "_", "y": "_"})
    R = mk({"eps": "h", "1": "g", "2": "a", "y": "_"}, [("eps", "1", 1), ("eps", "2", 2), ("1", "y", 1)])
    top = [("C", "C", "T"), ("C", "eps", "T")]
    Lp = mk({"C": "T", "eps": "f", "x": "T", "x'": "T", "2": "g", "21": "b", "y": "T", "y'": "T"},
            top + [("eps", "x", 1), ("eps", "2", 2), ("eps", "y", 3), ("2", "21", 1),
                   ("x", "x'", "T"), ("x'", "x'", "T"), ("y", "y'", "T"), ("y'", "y'", "T")])
    Kp = mk({"C": "T", "eps": "_", "y": "T", "y'": "T"},
            top + [("y", "y'", "T"), ("y'", "y'", "T")])
    for got, want in ((rule.L, L), (rule.K, K), (rule.R, R), (rule.Lp, Lp), (rule.Kp, Kp)):
        assert same(got, want)
    # every morphism is an inclusion
    for name, f in rule.morphisms().items():
        assert all(a == b for a, b in f.vmap.items()), name
        assert all(a == b for a, b in f.emap.items()), name
    Rp = mk({"C": "T", "eps": "h", "1": "g", "2": "a", "y": "T", "y'": "T"},
            top + [("eps", "1", 1), ("eps", "2", 2), ("1", "y", 1), ("y", "y'", "T"), ("y'", "y'", "T")])
    assert same(er.r_prime().apex, Rp)


def test_rule_encoding_of_ab():
    trs = parse_trs("sig a/1 b/1 c/0\na(b(x)) -> b(a(x))")
    rule = encode_rule(trs.signature, trs.rules[0]).rule
    assert same(rule.L, mk({"eps": "a", "1": "b", "x": "_"}, [("eps", "1", 1), ("1", "x", 1)]))


def test_collapsing_to_a_constant():
    trs = confluence_trs()
    rule = encode_rule(trs.signature, trs.rules[0]).rule
    assert same(rule.K, mk({"eps": "_"}))
    assert same(rule.R, mk({"eps": "a"}))
    assert rule.r.vmap == {"eps": "eps"}


def test_variable_rhs_identifies_root_and_variable():
    trs = parse_trs("sig g/1\ng(x) -> x")
    rule = encode_rule(trs.signature, trs.rules[0]).rule
    assert rule.r.vmap == {"eps": "x", "x": "x"}
    assert not is_mono(rule.r)


def test_context_vertex_name_is_fresh():
    trs = parse_trs("sig g/1\ng(C) -> C")
    er = encode_rule(trs.signature, trs.rules[0])
    assert "C" in er.rule.L.vertices
    assert er.context_vertex != "C" and er.context_vertex in er.rule.Lp.vertices


def test_encode_system():
    assert encode_system(parse_trs("sig a/0\n")) == []
    assert len(encode_system(confluence_trs())) == 2
    assert len(encode_system(parse_trs("sig a/1 b/1 c/0\na(b(x)) -> b(a(x))"))) == 1


def test_non_linear_rules_are_rejected():
    with pytest.raises(Exception, match="repeated"):
        parse_trs("sig f/2\nf(x, x) -> x")


# -- properties ----------------------------------------------------------------

seeds = st.integers(0, 10**6)


@given(seeds)
def test_decode_inverts_encode(seed):
    rng = random.Random(seed)
    term = random_term(rng, DEFAULT_SIGNATURE, 8, NameSupply("v"))
    enc = encode_term(DEFAULT_SIGNATURE, term)
    assert rename_canonically(decode_term(enc.rooted, DEFAULT_SIGNATURE)) == rename_canonically(term)


@given(seeds)
def test_encodings_are_arity_complete_trees(seed):
    rng = random.Random(seed)
    term = random_term(rng, DEFAULT_SIGNATURE, 8, NameSupply("v"))
    enc = encode_term(DEFAULT_SIGNATURE, term)
    g = enc.graph
    assert positions_in_graph(g, enc.root) == dict(enc.position_of)
    for v in g.vertices:
        assert len(g.in_edges[v]) == (0 if v == enc.root else 1)
        arity = DEFAULT_SIGNATURE.arity_of(g.vlabel[v])
        if v in enc.variable_heads:
            assert arity is None and not g.out_edges[v]
        else:
            assert sorted(g.elabel(e).value for e in g.out_edges[v]) == list(range(1, arity + 1))


@given(seeds)
def test_encoded_rules_are_valid(seed):
    rng = random.Random(seed)
    rule = random_rule(rng, DEFAULT_SIGNATURE, 4)
    er = encode_rule(DEFAULT_SIGNATURE, rule)
    r = er.rule
    assert r.validate() == []
    for f in (r.tL, r.tK, r.l, r.lp):
        assert is_mono(f)
    assert is_mono(r.r) == (not isinstance(rule.rhs, Var))
    assert verify_pullback_universal((r.tL, r.lp), SpanResult(r.K, r.l, r.tK))


@given(seeds)
def test_mono_of_pattern_sits_at_the_hole(seed):
    rng = random.Random(seed)
    rule = random_rule(rng, DEFAULT_SIGNATURE, 3)
    ctx = random_context(rng, DEFAULT_SIGNATURE, 3, NameSupply("w"))
    sigma = {x: random_term(rng, DEFAULT_SIGNATURE, 2, NameSupply(f"s{x}")) for x in variables(rule.lhs)}
    s = plug(ctx, apply_substitution(rule.lhs, sigma))
    er = encode_rule(DEFAULT_SIGNATURE, rule)
    enc = encode_term(DEFAULT_SIGNATURE, s)
    monos = enumerate_morphisms(er.rule.L, enc.graph, mono_only=True)
    roots = {enc.position_of[m.vmap[er.l_encoding.root]] for m in monos}
    assert hole_position(ctx) in roots
    # and the strong matches are exactly the term-level redexes of this rule
    trs = Trs(DEFAULT_SIGNATURE, (rule,))
    from pbpo_trs.terms import all_redexes
    redex_positions = {p for _, p in all_redexes(trs, s)}
    matched = {enc.position_of[m.vmap[er.l_encoding.root]] for m, _ in find_matches(er.rule, enc.graph)}
    assert matched == redex_positions

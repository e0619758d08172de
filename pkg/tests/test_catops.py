import random

import pytest
from hypothesis import given, strategies as st

from conftest import mk
from pbpo_trs.catops import (CospanResult, SpanResult, commutes, pullback, pushout,
                             verify_pullback_universal, verify_pushout_universal)
from pbpo_trs.encoding import encode_rule, encode_term
from pbpo_trs.engine import find_matches
from pbpo_trs.fixtures import relabel_host, relabel_rule
from pbpo_trs.graph import (GraphMorphism, LabeledGraph, MorphismError, are_isomorphic, compose,
                            enumerate_morphisms, identity, is_mono, validate_morphism)
from pbpo_trs.lattice import BOTTOM, TOP
from pbpo_trs.randgen import DEFAULT_SIGNATURE, random_cospan, random_span
from pbpo_trs.terms import parse_term, parse_trs
from pbpo_trs.zoning import undirected_cycle_edges

EMPTY = LabeledGraph({})


def _from_empty(g):
    return GraphMorphism(EMPTY, g, {}, {})


def test_pushout_of_empty_span_is_disjoint_union():
    B = mk({"u": "a"}, [("u", "u", 1)])
    C = mk({"u": "b", "v": "_"}, [("u", "v", 2)])
    po = pushout(_from_empty(B), _from_empty(C))
    expected = mk({"p": "a", "q": "b", "r": "_"}, [("p", "p", 1), ("q", "r", 2)])
    assert are_isomorphic(po.apex, expected) is not None
    assert is_mono(po.left) and is_mono(po.right)


def test_pushout_joins_labels_of_glued_vertex():
    A = mk({"s": "_"})
    B = mk({"s": "a"})
    C = mk({"s": "_", "t": "b"}, [("s", "t", 1)])
    po = pushout(GraphMorphism(A, B, {"s": "s"}, {}), GraphMorphism(A, C, {"s": "s"}, {}))
    expected = mk({"s": "a", "t": "b"}, [("s", "t", 1)])
    assert are_isomorphic(po.apex, expected) is not None


def test_pushout_requires_monic_leg():
    A = mk({"p": "_", "q": "_"})
    C = mk({"r": "_"})
    with pytest.raises(MorphismError):
        pushout(identity(A), GraphMorphism(A, C, {"p": "r", "q": "r"}, {}))


def test_relabel_rule_r_prime():
    # K' <- K -> R: x becomes c; z and its loop come from K'
    rule = relabel_rule()
    po = pushout(rule.r, rule.tK)
    expected = mk({"x": "c", "z": "T"}, [("z", "z", "_")])
    assert are_isomorphic(po.apex, expected) is not None


def test_pullback_along_identity():
    B = mk({"u": "a", "v": "_"}, [("u", "v", 1), ("v", "v", "_")])
    X = mk({"p": "T", "q": "T"}, [("p", "q", "T"), ("q", "q", "T")])
    f = GraphMorphism(B, X, {"u": "p", "v": "q"}, {"u>v": "p>q", "v>v": "q>q"})
    pb = pullback(f, identity(X))
    assert are_isomorphic(pb.apex, B) is not None
    assert is_mono(pb.left)


def test_match_square_recovers_pattern():
    trs = parse_trs("sig a/1 b/0\na(x) -> x\n")
    rule = encode_rule(trs.signature, trs.rules[0]).rule
    G = encode_term(trs.signature, parse_term("a(b)", trs.signature)).graph
    ((m, alpha),) = find_matches(rule, G)
    pb = pullback(alpha, rule.tL)
    assert are_isomorphic(pb.apex, rule.L) is not None


def test_relabel_extraction_pullback():
    # pulling the adherence back along l' keeps z1, z2 and their edges but
    # lowers x to bottom and drops every edge touching x
    rule = relabel_rule()
    GL = relabel_host()
    alpha = [a for m, a in find_matches(rule, GL) if m.vmap["x"] == "x"][0]
    pb = pullback(alpha, rule.lp)
    expected = mk({"x": "_", "z1": "b", "z2": "c"}, [("z1", "z2", "_"), ("z2", "z2", "_")])
    assert are_isomorphic(pb.apex, expected) is not None


def _sample_span():
    A = mk({"s": "_"})
    B = mk({"s": "a", "k": "b"}, [("s", "k", 1)])
    C = mk({"s": "_", "t": "T"}, [("t", "s", 2)])
    return GraphMorphism(A, B, {"s": "s"}, {}), GraphMorphism(A, C, {"s": "s"}, {})


def test_verify_pushout_accepts_canonical():
    b, c = _sample_span()
    assert verify_pushout_universal((b, c), pushout(b, c))


def test_verify_pushout_rejects_extra_vertex():
    b, c = _sample_span()
    po = pushout(b, c)
    bigger = LabeledGraph({**po.apex.vlabel, "junk": BOTTOM}, po.apex.edge)
    cand = CospanResult(bigger, GraphMorphism(b.cod, bigger, po.left.vmap, po.left.emap),
                        GraphMorphism(c.cod, bigger, po.right.vmap, po.right.emap))
    assert commutes(b, cand.left, c, cand.right)
    assert not verify_pushout_universal((b, c), cand)


def _cocone_on(apex, po, b, c):
    return CospanResult(apex, GraphMorphism(b.cod, apex, po.left.vmap, po.left.emap),
                        GraphMorphism(c.cod, apex, po.right.vmap, po.right.emap))


def test_verify_pushout_rejects_lowered_label():
    b, c = _sample_span()
    po = pushout(b, c)
    v = po.left.vmap["s"]
    cand = _cocone_on(po.apex.with_vertex_labels({v: BOTTOM}), po, b, c)
    assert not validate_morphism(cand.left)[0]
    assert not verify_pushout_universal((b, c), cand)


def test_verify_pushout_rejects_raised_label():
    # legs stay valid, but the canonical cocone cannot factor through it
    b, c = _sample_span()
    po = pushout(b, c)
    v = po.left.vmap["k"]
    cand = _cocone_on(po.apex.with_vertex_labels({v: TOP}), po, b, c)
    assert validate_morphism(cand.left)[0] and validate_morphism(cand.right)[0]
    assert not verify_pushout_universal((b, c), cand)


def _sample_cospan():
    X = mk({"p": "T", "q": "T"}, [("p", "q", "T")])
    B = mk({"u": "a", "v": "_"}, [("u", "v", 1)])
    C = mk({"s": "T", "t": "b"}, [("s", "t", "T")])
    return (GraphMorphism(B, X, {"u": "p", "v": "q"}, {"u>v": "p>q"}),
            GraphMorphism(C, X, {"s": "p", "t": "q"}, {"s>t": "p>q"}))


def test_verify_pullback_accepts_canonical():
    b, c = _sample_cospan()
    pb = pullback(b, c)
    assert are_isomorphic(pb.apex, mk({"x": "a", "y": "_"}, [("x", "y", 1)])) is not None
    assert verify_pullback_universal((b, c), pb)


def test_verify_pullback_rejects_extra_vertex():
    b, c = _sample_cospan()
    pb = pullback(b, c)
    x = next(iter(pb.apex.vertices))
    bigger = LabeledGraph({**pb.apex.vlabel, "junk": BOTTOM}, pb.apex.edge)
    cand = SpanResult(bigger, GraphMorphism(bigger, b.dom, {**pb.left.vmap, "junk": pb.left.vmap[x]}, pb.left.emap),
                      GraphMorphism(bigger, c.dom, {**pb.right.vmap, "junk": pb.right.vmap[x]}, pb.right.emap))
    assert commutes(cand.left, b, cand.right, c)
    assert not verify_pullback_universal((b, c), cand)


def test_verify_pullback_rejects_lowered_label():
    b, c = _sample_cospan()
    pb = pullback(b, c)
    low = pb.apex.with_vertex_labels({v: BOTTOM for v in pb.apex.vertices})
    cand = SpanResult(low, GraphMorphism(low, b.dom, pb.left.vmap, pb.left.emap),
                      GraphMorphism(low, c.dom, pb.right.vmap, pb.right.emap))
    assert validate_morphism(cand.left)[0] and validate_morphism(cand.right)[0]
    assert not verify_pullback_universal((b, c), cand)


# -- properties ----------------------------------------------------------------

seeds = st.integers(0, 10**6)


@given(seeds)
def test_pushout_commutes_and_keeps_monos(seed):
    b, c = random_span(random.Random(seed), DEFAULT_SIGNATURE)
    po = pushout(b, c)
    assert validate_morphism(po.left)[0] and validate_morphism(po.right)[0]
    assert commutes(b, po.left, c, po.right)
    assert is_mono(po.left)


@given(seeds)
def test_pullback_commutes_and_keeps_monos(seed):
    b, c = random_cospan(random.Random(seed), DEFAULT_SIGNATURE, monic_left=True)
    pb = pullback(b, c)
    assert validate_morphism(pb.left)[0] and validate_morphism(pb.right)[0]
    assert commutes(pb.left, b, pb.right, c)
    assert is_mono(pb.right)


@given(seeds)
def test_pullback_of_pushout_recovers_span_apex(seed):
    # with both legs monic the span is itself a pullback of its pushout,
    # up to the labels: its apex maps bijectively onto the pullback apex
    b, c = random_span(random.Random(seed), DEFAULT_SIGNATURE)
    if not is_mono(b):
        return
    po = pushout(b, c)
    pb = pullback(po.left, po.right)
    mediators = [f for f in enumerate_morphisms(b.dom, pb.apex, mono_only=True)
                 if compose(f, pb.left) == b and compose(f, pb.right) == c]
    assert len(mediators) == 1
    f = mediators[0]
    assert len(f.vmap) == len(pb.apex.vertices) and len(f.emap) == len(pb.apex.edges)


@given(seeds)
def test_cycle_preserving_pullback(seed):
    # cycles of G whose image lies in im(h) pull back to cycle edges of Y,
    # for monic h, the case that occurs in rewrite steps
    rng = random.Random(seed)
    h, g = random_cospan(rng, DEFAULT_SIGNATURE, monic_left=True)
    pb = pullback(g, h)
    image_h = set(h.emap.values())
    inside = g.dom.subgraph(g.dom.vertices, [e for e in g.dom.edges if g.emap[e] in image_h])
    cycles = undirected_cycle_edges(inside)
    y_cycles = undirected_cycle_edges(pb.apex)
    for e in pb.apex.edges:
        if pb.left.emap[e] in cycles:
            assert e in y_cycles


def test_cycle_preservation_needs_a_monic_leg():
    # a loop pulled back along a non-injective leg unrolls into a plain edge
    X = mk({"n": "T"}, [("n", "n", "_", "loop")])
    G = mk({"b": "_"}, [("b", "b", "_", "bl")])
    H = mk({"c0": "_", "c1": "_"}, [("c1", "c0", "_", "ce")])
    g = GraphMorphism(G, X, {"b": "n"}, {"bl": "loop"})
    h = GraphMorphism(H, X, {"c0": "n", "c1": "n"}, {"ce": "loop"})
    pb = pullback(g, h)
    assert len(pb.apex.edges) == 1 and not undirected_cycle_edges(pb.apex)

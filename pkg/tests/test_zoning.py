import random

import pytest
from hypothesis import given, strategies as st

from conftest import mk
from pbpo_trs.encoding import encode_rule, encode_system, encode_term
from pbpo_trs.engine import find_matches
from pbpo_trs.fixtures import (THREE_ZONE_SIG, confluence_graph, confluence_trs, relabel_host,
                               three_zone_graph)
from pbpo_trs.graph import LabeledGraph, are_isomorphic
from pbpo_trs.lattice import BOTTOM, Signature, base
from pbpo_trs.randgen import DEFAULT_SIGNATURE, random_graph
from pbpo_trs.terms import parse_term, parse_trs, rename_canonically
from pbpo_trs.zoning import (ZoneError, bad_nodes, check_match_in_one_zone, classify_nodes, compute_zoning,
                             cycle_through, drop_cycles, is_acyclic, relabel_bad_nodes, undirected_cycle_edges,
                             undirected_path, zone_to_term)

CONF_SIG = confluence_trs().signature


# -- undirected cycles ----------------------------------------------------------

def test_cycle_edges_of_relabel_host():
    G = relabel_host()
    assert undirected_cycle_edges(G) == set(G.edges)
    assert not drop_cycles(G).edges
    assert set(drop_cycles(G).vertices) == set(G.vertices)


def test_parallel_edges_form_a_cycle():
    G = mk({"a": "a", "b": "b"}, [("a", "b", 1, "p"), ("a", "b", 1, "q")])
    assert undirected_cycle_edges(G) == {"p", "q"}
    assert sorted(cycle_through(G, "p")) == ["p", "q"]


def test_trees_have_no_cycle_edges():
    G = encode_term(CONF_SIG, parse_term("g(f(h(a)))", CONF_SIG)).graph
    assert undirected_cycle_edges(G) == set()
    assert drop_cycles(G) == G
    assert undirected_cycle_edges(confluence_graph()) == set()


def test_undirected_cycle_mixes_directions():
    G = mk({"a": "a", "b": "b", "c": "c"}, [("a", "b", 1), ("c", "b", 1), ("a", "c", 1)])
    assert undirected_cycle_edges(G) == set(G.edges)
    assert undirected_path(G, "a", "b", avoid="a>b") == ["a>c", "c>b"]


def test_only_the_cycle_part_is_dropped():
    G = mk({"a": "a", "b": "b", "c": "c"}, [("a", "b", 1), ("b", "a", 1), ("b", "c", 1), ("c", "c", 1)])
    assert undirected_cycle_edges(G) == {"a>b", "b>a", "c>c"}
    assert set(drop_cycles(G).edges) == {"b>c"}
    assert cycle_through(G, "b>c") is None
    assert cycle_through(G, "c>c") == ["c>c"]


def test_is_acyclic():
    assert is_acyclic(three_zone_graph())
    assert not is_acyclic(relabel_host())
    assert not is_acyclic(mk({"x": "a"}, [("x", "x", 1)]))


# -- classification and zones --------------------------------------------------

def test_classify_confluence_graph():
    cls = classify_nodes(CONF_SIG, confluence_graph())
    assert {v for v, c in cls.items() if c.good} == {"n1", "n3", "n5"}
    assert not cls["n3"].in_wf and cls["n3"].out_wf
    assert cls["n2"].out_wf and not cls["n2"].good
    assert bad_nodes(CONF_SIG, confluence_graph()) == {"n2", "n4"}


def test_out_well_formedness_needs_exact_argument_labels():
    sig = Signature({"f": 2, "a": 0})
    ok = mk({"r": "f", "x": "a", "y": "a"}, [("r", "x", 2), ("r", "y", 1)])
    assert classify_nodes(sig, ok)["r"].good
    twice = mk({"r": "f", "x": "a", "y": "a"}, [("r", "x", 1), ("r", "y", 1)])
    assert not classify_nodes(sig, twice)["r"].out_wf
    symbol_edge = LabeledGraph.build([("r", base("f")), ("x", base("a")), ("y", base("a"))],
                                     [("e1", "r", "x", base(1)), ("e2", "r", "y", base("a"))])
    assert not classify_nodes(sig, symbol_edge)["r"].out_wf
    assert not classify_nodes(sig, mk({"r": "_"}))["r"].out_wf
    assert not classify_nodes(sig, mk({"r": "T"}))["r"].good


def test_three_zone_fixture():
    z = compute_zoning(THREE_ZONE_SIG, three_zone_graph())
    assert len(z.zones()) == 3
    assert z.bridges == frozenset({"l>m", "r>m"})
    assert zone_to_term(THREE_ZONE_SIG, three_zone_graph(), z, "m") == parse_term("a", THREE_ZONE_SIG)
    assert z.roots == {"l": "l", "m": "m", "r": "r"}


def test_three_zone_bad_nodes_decode_to_variables():
    z = compute_zoning(THREE_ZONE_SIG, three_zone_graph())
    t = zone_to_term(THREE_ZONE_SIG, three_zone_graph(), z, "l")
    assert rename_canonically(t) == rename_canonically(parse_term("x", THREE_ZONE_SIG))


def test_confluence_fixture_zones():
    z = compute_zoning(CONF_SIG, confluence_graph())
    assert sorted(sorted(z.zone_vertices(k)) for k in z.zones()) == [["n1", "n2"], ["n3"], ["n4", "n5"]]
    assert z.bridges == frozenset({"n2>n3", "n4>n3"})
    assert z.roots == {"n1": "n1", "n3": "n3", "n4": "n5"}
    terms = {k: rename_canonically(zone_to_term(CONF_SIG, confluence_graph(), z, k)) for k in z.zones()}
    assert terms == {"n1": rename_canonically(parse_term("g(x)", CONF_SIG)),
                     "n3": parse_term("a", CONF_SIG),
                     "n4": rename_canonically(parse_term("h(x)", CONF_SIG))}


def test_term_encoding_is_a_single_zone():
    g = encode_term(CONF_SIG, parse_term("g(f(h(a)))", CONF_SIG)).graph
    z = compute_zoning(CONF_SIG, g)
    assert len(z.zones()) == 1 and not z.bridges


def test_cyclic_zone_cannot_be_decoded():
    sig = Signature({"f": 1})
    G = mk({"p": "f", "q": "f"}, [("p", "q", 1), ("q", "p", 1)])
    z = compute_zoning(sig, G)
    assert len(z.zones()) == 1
    with pytest.raises(ZoneError):
        zone_to_term(sig, G, z, z.zones()[0])


def test_relabel_bad_nodes():
    G = relabel_bad_nodes(CONF_SIG, confluence_graph())
    assert G.vlabel["n2"] == BOTTOM and G.vlabel["n4"] == BOTTOM and G.vlabel["n1"] == base("g")


def test_matches_stay_in_one_zone():
    for er in encode_system(confluence_trs()):
        for m, _ in find_matches(er.rule, confluence_graph()):
            assert check_match_in_one_zone(er, confluence_graph(), m)


def test_zone_check_detects_spanning_maps():
    trs = parse_trs("sig f/1 a/0\nf(x) -> a")
    er = encode_rule(trs.signature, trs.rules[0])
    from pbpo_trs.graph import GraphMorphism
    G = three_zone_graph()
    m = GraphMorphism(er.rule.L, G, {"eps": "l", "x": "m"}, {"eps>x": "l>m"})
    assert not check_match_in_one_zone(er, G, m)


# -- properties --------------------------------------------------------------------

@given(st.integers(0, 10**6))
def test_zoning_is_order_independent(seed):
    rng = random.Random(seed)
    G = random_graph(rng, DEFAULT_SIGNATURE, 7)
    order = sorted(G.edges)
    rng.shuffle(order)
    a = compute_zoning(DEFAULT_SIGNATURE, G)
    b = compute_zoning(DEFAULT_SIGNATURE, G, order)
    assert a.partition() == b.partition() and a.bridges == b.bridges


@given(st.integers(0, 10**6))
def test_bridges_leave_bad_nodes(seed):
    rng = random.Random(seed)
    G = random_graph(rng, DEFAULT_SIGNATURE, 7)
    z = compute_zoning(DEFAULT_SIGNATURE, G)
    bad = bad_nodes(DEFAULT_SIGNATURE, G)
    for e in z.bridges:
        assert G.src(e) in bad


@given(st.integers(0, 10**6))
def test_drop_cycles_leaves_a_forest(seed):
    rng = random.Random(seed)
    G = random_graph(rng, DEFAULT_SIGNATURE, 7)
    D = drop_cycles(G)
    assert undirected_cycle_edges(D) == set()
    assert drop_cycles(D) == D
    assert are_isomorphic(drop_cycles(D), D) is not None


def test_relabeling_a_bad_node_keeps_steps():
    trs = parse_trs("sig g/1 a/0\ng(x) -> a")
    er = encode_rule(trs.signature, trs.rules[0])
    G = mk({"r": "g", "v": "_"}, [("r", "v", 1)])
    assert bad_nodes(trs.signature, G) == {"v"}
    G2 = G.with_vertex_labels({"v": base("a")})
    assert len(find_matches(er.rule, G)) == len(find_matches(er.rule, G2)) == 1


def test_relabeling_can_create_steps_when_the_node_turns_good():
    # the correspondence is only one-way: a top-labeled parent is bad, but
    # relabeled with g it becomes good and the rule starts to match
    trs = parse_trs("sig g/1 a/0\ng(x) -> a")
    er = encode_rule(trs.signature, trs.rules[0])
    G = mk({"v": "T", "w": "a"}, [("v", "w", 1)])
    assert "v" in bad_nodes(trs.signature, G)
    assert find_matches(er.rule, G) == []
    G2 = G.with_vertex_labels({"v": base("g")})
    assert "v" not in bad_nodes(trs.signature, G2)
    assert len(find_matches(er.rule, G2)) == 1

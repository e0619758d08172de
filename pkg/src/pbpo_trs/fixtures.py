"""Small named inputs used by the demos, the CLI examples and the tests.

Only inputs live here; expected outputs are stated where they are checked.
Unlabeled edges of the hand-drawn examples carry the label ``BOTTOM``.
"""
from __future__ import annotations

from .engine import PbpoRule
from .graph import GraphMorphism, LabeledGraph
from .lattice import BOTTOM, TOP, Signature, base
from .terms import Trs, parse_trs

__all__ = [
    "relabel_rule", "relabel_host", "rule_encoding_trs", "ab_trs", "ab_cycle", "ab_four_cycle",
    "confluence_trs", "confluence_graph", "disconnected_trs", "disconnected_graph", "three_zone_graph",
    "THREE_ZONE_SIG",
]


def relabel_rule() -> PbpoRule:
    """Relabel a loopless node to ``c`` and cut it loose from its surroundings.

    ``L'`` lets the matched node ``x`` have edges to and from the rest (``z``),
    but no loop; ``K'`` keeps only ``z`` and its loop, so every edge incident
    to ``x`` is deleted.
    """
    L = LabeledGraph({"x": BOTTOM})
    K = LabeledGraph({"x": BOTTOM})
    R = LabeledGraph({"x": base("c")})
    Lp = LabeledGraph.build([("x", TOP), ("z", TOP)],
                            [("xz", "x", "z", BOTTOM), ("zx", "z", "x", BOTTOM), ("zz", "z", "z", BOTTOM)])
    Kp = LabeledGraph.build([("x", BOTTOM), ("z", TOP)], [("zz", "z", "z", BOTTOM)])

    def x_only(a, b):
        return GraphMorphism(a, b, {"x": "x"}, {})

    lp = GraphMorphism(Kp, Lp, {"x": "x", "z": "z"}, {"zz": "zz"})
    return PbpoRule(L, K, R, Lp, Kp, x_only(K, L), x_only(K, R), lp, x_only(L, Lp), x_only(K, Kp),
                    name="relabel")


def relabel_host() -> LabeledGraph:
    """``x`` (a) with two parallel edges to ``z1`` (b); ``z1 -> z2 -> x``; a loop on ``z2`` (c)."""
    return LabeledGraph.build(
        [("x", base("a")), ("z1", base("b")), ("z2", base("c"))],
        [("e1", "x", "z1", BOTTOM), ("e2", "x", "z1", BOTTOM), ("e3", "z1", "z2", BOTTOM),
         ("e4", "z2", "x", BOTTOM), ("e5", "z2", "z2", BOTTOM)])


def rule_encoding_trs() -> Trs:
    return parse_trs("sig f/3 g/1 h/2 a/0 b/0\nf(x, g(b), y) -> h(g(y), a)\n")


def ab_trs() -> Trs:
    return parse_trs("sig a/1 b/1 c/0\na(b(x)) -> b(a(x))\n")


def ab_cycle() -> LabeledGraph:
    """The directed two-cycle ``p(a) -> q(b) -> p``."""
    return LabeledGraph.build([("p", base("a")), ("q", base("b"))],
                              [("pq", "p", "q", base(1)), ("qp", "q", "p", base(1))])


def ab_four_cycle() -> LabeledGraph:
    """``a -> b -> a -> b -> back``: large enough for a mono of ``a(b(x))``."""
    vs = [("v0", base("a")), ("v1", base("b")), ("v2", base("a")), ("v3", base("b"))]
    es = [(f"e{i}", f"v{i}", f"v{(i + 1) % 4}", base(1)) for i in range(4)]
    return LabeledGraph.build(vs, es)


def confluence_trs() -> Trs:
    return parse_trs("sig f/1 g/1 h/1 a/0 b/0\ng(x) -> a\nh(x) -> b\n")


def confluence_graph() -> LabeledGraph:
    """``g -> f -> a <- f <- h``: two parents share the constant ``a``."""
    return LabeledGraph.build(
        [("n1", base("g")), ("n2", base("f")), ("n3", base("a")), ("n4", base("f")), ("n5", base("h"))],
        [("n1>n2", "n1", "n2", base(1)), ("n2>n3", "n2", "n3", base(1)),
         ("n4>n3", "n4", "n3", base(1)), ("n5>n4", "n5", "n4", base(1))])


def disconnected_trs() -> Trs:
    return parse_trs("sig f/1 g/1 a/0\ng(x) -> a\n")


def disconnected_graph() -> LabeledGraph:
    """``g -> a`` next to a separate vertex ``a``.

    The separate component may be typed by the upper context closure (kept)
    or by the closure below the variable (deleted with the argument).
    """
    return LabeledGraph.build([("n1", base("g")), ("n2", base("a")), ("m", base("a"))],
                              [("n1>n2", "n1", "n2", base(1))])


THREE_ZONE_SIG = Signature({"f": 1, "a": 0})


def three_zone_graph() -> LabeledGraph:
    """``f -> a <- f``."""
    return LabeledGraph.build([("l", base("f")), ("m", base("a")), ("r", base("f"))],
                              [("l>m", "l", "m", base(1)), ("r>m", "r", "m", base(1))])

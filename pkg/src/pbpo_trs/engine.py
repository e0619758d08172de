"""PBPO+ rules and rewrite steps over lattice-labeled graphs.

A step is a match square (pullback of the adherence ``alpha`` along the
typing ``tL``), an extraction pullback of ``alpha`` along ``l'`` and a gluing
pushout along the unique mono ``u: K -> G_K`` with ``tK = u' ∘ u``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .catops import (commutes, is_pullback_square, pullback, pushout, rename_apex,
                     untagged_names, verify_pullback_universal, verify_pushout_universal)
from .graph import (GraphMorphism, LabeledGraph, RootedGraph, are_isomorphic, compose,
                    identity, is_mono, iter_morphisms, validate_morphism)

__all__ = [
    "PbpoRule", "RewriteStep", "EngineError", "find_matches", "apply_step", "successors",
    "apply_at_position", "steps_at_position", "rewrite_bounded", "Trace", "TraceStep", "IsoIndex",
]


class EngineError(RuntimeError):
    """An engine invariant failed (e.g. the mono ``u`` is missing or not unique)."""


@dataclass(frozen=True, eq=False)
class PbpoRule:
    L: LabeledGraph
    K: LabeledGraph
    R: LabeledGraph
    Lp: LabeledGraph
    Kp: LabeledGraph
    l: GraphMorphism
    r: GraphMorphism
    lp: GraphMorphism
    tL: GraphMorphism
    tK: GraphMorphism
    name: str = ""

    @property
    def is_linear(self) -> bool:
        return is_mono(self.lp)

    def morphisms(self) -> dict[str, GraphMorphism]:
        return {"l": self.l, "r": self.r, "lp": self.lp, "tL": self.tL, "tK": self.tK}

    def validate(self) -> list[str]:
        """Problems with the rule data; empty when the rule is well formed."""
        problems = []
        ends = {"l": (self.K, self.L), "r": (self.K, self.R), "lp": (self.Kp, self.Lp),
                "tL": (self.L, self.Lp), "tK": (self.K, self.Kp)}
        for name, f in self.morphisms().items():
            dom, cod = ends[name]
            if f.dom != dom or f.cod != cod:
                problems.append(f"{name}: wrong domain or codomain")
                continue
            ok, why = validate_morphism(f)
            if not ok:
                problems.extend(f"{name}: {w}" for w in why)
        if problems:
            return problems
        if not is_mono(self.tL):
            problems.append("tL is not monic")
        if not is_mono(self.tK):
            problems.append("tK is not monic")
        if not is_pullback_square(self.l, self.tK, self.tL, self.lp):
            problems.append("pullback property fails for the square (l, tK, tL, lp)")
        return problems


@dataclass(frozen=True, eq=False)
class RewriteStep:
    rule: PbpoRule
    GL: LabeledGraph
    GK: LabeledGraph
    GR: LabeledGraph
    m: GraphMorphism
    alpha: GraphMorphism
    gL: GraphMorphism
    up: GraphMorphism
    u: GraphMorphism
    gR: GraphMorphism
    w: GraphMorphism

    def check(self, universal: bool = False) -> list[str]:
        """Re-verify the step diagram; ``universal`` adds the brute-force oracles."""
        rule = self.rule
        problems = []
        if not is_mono(self.m):
            problems.append("m is not monic")
        if not is_pullback_square(self.m, identity(rule.L), self.alpha, rule.tL):
            problems.append("match square is not a pullback")
        if not is_pullback_square(self.gL, self.up, self.alpha, rule.lp):
            problems.append("extraction square is not a pullback")
        tk2 = compose(self.u, self.up)
        if not is_mono(self.u) or tk2.vmap != rule.tK.vmap or tk2.emap != rule.tK.emap:
            problems.append("u is not a mono with tK = u' . u")
        if not commutes(self.u, self.gR, rule.r, self.w):
            problems.append("gluing square does not commute")
        if universal:
            from .catops import CospanResult, SpanResult
            if not verify_pullback_universal((self.alpha, rule.tL),
                                             SpanResult(rule.L, self.m, identity(rule.L))):
                problems.append("match square fails the universal check")
            if not verify_pullback_universal((self.alpha, rule.lp), SpanResult(self.GK, self.gL, self.up)):
                problems.append("extraction square fails the universal check")
            if not verify_pushout_universal((rule.r, self.u), CospanResult(self.GR, self.w, self.gR)):
                problems.append("gluing square fails the universal check")
        return problems


def find_matches(rule: PbpoRule, G: LabeledGraph, *, fixed_v=None) -> list[tuple[GraphMorphism, GraphMorphism]]:
    """All ``(m, alpha)`` establishing a strong match of ``rule`` in ``G``.

    ``m`` ranges over monos ``L -> G`` (optionally with pinned vertex images);
    ``alpha`` over morphisms ``G -> L'`` with ``alpha ∘ m = tL`` whose match
    square is a pullback. Elements outside ``m(L)`` are only tried against
    elements outside ``tL(L)``, which every pullback square requires.
    """
    L, Lp, tL = rule.L, rule.Lp, rule.tL
    pattern_v = set(tL.vmap.values())
    pattern_e = set(tL.emap.values())
    context_v = [v for v in Lp.vertices if v not in pattern_v]
    context_e = [e for e in Lp.edges if e not in pattern_e]
    ident = identity(L)
    out = []
    for m in iter_morphisms(L, G, mono=True, fixed_v=fixed_v):
        fv, fe, clash = {}, {}, False
        for x in L.vertices:
            if fv.setdefault(m.vmap[x], tL.vmap[x]) != tL.vmap[x]:
                clash = True
        for x in L.edges:
            if fe.setdefault(m.emap[x], tL.emap[x]) != tL.emap[x]:
                clash = True
        if clash:
            continue
        for alpha in iter_morphisms(
            G, Lp, fixed_v=fv, fixed_e=fe,
            allowed_v=lambda v: None if v in fv else context_v,
            allowed_e=lambda e: None if e in fe else context_e,
        ):
            if is_pullback_square(m, ident, alpha, tL):
                out.append((m, alpha))
    return out


def _tidy_extraction(pb, GL: LabeledGraph):
    # name G_K elements after their image in G_L when that is injective
    vimg = {x: pb.left.vmap[x] for x in pb.apex.vertices}
    eimg = {x: pb.left.emap[x] for x in pb.apex.edges}
    if len(set(vimg.values())) == len(vimg) and len(set(eimg.values())) == len(eimg):
        return rename_apex(pb, vimg, eimg)
    return pb


def apply_step(rule: PbpoRule, G: LabeledGraph, m: GraphMorphism, alpha: GraphMorphism) -> RewriteStep:
    """Build the rewrite step induced by the strong match ``(m, alpha)``."""
    if alpha.dom != G or m.cod != G:
        raise EngineError("match does not target the host graph")
    pb = _tidy_extraction(pullback(alpha, rule.lp), G)
    GK, gL, up = pb.apex, pb.left, pb.right
    tK = rule.tK
    allowed_v = {k: [x for x in GK.vertices if up.vmap[x] == tK.vmap[k]] for k in rule.K.vertices}
    allowed_e = {k: [x for x in GK.edges if up.emap[x] == tK.emap[k]] for k in rule.K.edges}
    us = list(itertools.islice(
        iter_morphisms(rule.K, GK, mono=True, allowed_v=allowed_v, allowed_e=allowed_e), 2))
    if len(us) != 1:
        raise EngineError(f"expected exactly one mono u: K -> G_K, found {len(us)}")
    u = us[0]
    po = pushout(rule.r, u)
    vn, en = untagged_names(po, prefer="C")
    po = rename_apex(po, vn, en)
    return RewriteStep(rule, G, GK, po.apex, m, alpha, gL, up, u, po.right, po.left)


def successors(rules: Sequence[PbpoRule], G: LabeledGraph) -> list[tuple[int, RewriteStep]]:
    out = []
    for i, rule in enumerate(rules):
        for m, alpha in find_matches(rule, G):
            out.append((i, apply_step(rule, G, m, alpha)))
    return out


def _root_and_positions(g):
    from .encoding import TermEncoding, positions_in_graph
    if isinstance(g, TermEncoding):
        return g.graph, dict(g.position_of)
    if isinstance(g, RootedGraph):
        return g.graph, positions_in_graph(g.graph, g.root)
    sources = [v for v in g.vertices if not g.in_edges[v]]
    if len(sources) != 1:
        return g, {}
    return g, positions_in_graph(g, sources[0])


def steps_at_position(erule, g, p) -> list[RewriteStep]:
    """All steps of an encoded rule whose match sends the lhs root to position ``p``."""
    graph, pos = _root_and_positions(g)
    target = [v for v, q in pos.items() if q == tuple(p)]
    if len(target) != 1:
        return []
    rule = erule.rule
    fixed = {erule.l_encoding.root: target[0]}
    return [apply_step(rule, graph, m, a) for m, a in find_matches(rule, graph, fixed_v=fixed)]


def apply_at_position(erule, g, p) -> LabeledGraph | None:
    """Result of applying an encoded rule at position ``p``, or ``None``."""
    steps = steps_at_position(erule, g, p)
    return steps[0].GR if steps else None


class IsoIndex:
    """Graphs up to isomorphism, bucketed by a cheap invariant."""

    def __init__(self):
        self.graphs: list[LabeledGraph] = []
        self._buckets: dict = {}

    def find(self, g: LabeledGraph) -> int | None:
        for i in self._buckets.get(g.invariant_key(), ()):
            if are_isomorphic(self.graphs[i], g) is not None:
                return i
        return None

    def add(self, g: LabeledGraph) -> tuple[int, bool]:
        i = self.find(g)
        if i is not None:
            return i, False
        self.graphs.append(g)
        self._buckets.setdefault(g.invariant_key(), []).append(len(self.graphs) - 1)
        return len(self.graphs) - 1, True

    def __len__(self):
        return len(self.graphs)


@dataclass
class TraceStep:
    rule_index: int
    step: RewriteStep


@dataclass
class Trace:
    """Outcome of :func:`rewrite_bounded`.

    ``first``: ``steps`` is the single derivation and ``graphs`` its graphs.
    ``bfs``: ``graphs`` are the reachable graphs up to isomorphism,
    ``transitions`` the ``(from, rule, to)`` edges between them, and
    ``longest`` the length of the longest derivation (``None`` when the
    explored state space has a cycle).
    """
    strategy: str
    graphs: list[LabeledGraph]
    steps: list[TraceStep] = field(default_factory=list)
    transitions: list[tuple[int, int, int]] = field(default_factory=list)
    normal_forms: list[LabeledGraph] = field(default_factory=list)
    bound_hit: bool = False
    cyclic: bool = False
    longest: int | None = 0

    def __len__(self):
        return len(self.steps)


def rewrite_bounded(rules: Sequence[PbpoRule], G: LabeledGraph, max_steps: int = 1000,
                    strategy: str = "first") -> Trace:
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    if strategy in ("first", "first-match"):
        return _run_first(rules, G, max_steps)
    if strategy in ("bfs", "all-branches-bfs"):
        return _run_bfs(rules, G, max_steps)
    raise ValueError(f"unknown strategy {strategy!r}")


def _first_step(rules, G):
    for i, rule in enumerate(rules):
        matches = find_matches(rule, G)
        if matches:
            m, alpha = matches[0]
            return i, apply_step(rule, G, m, alpha)
    return None


def _run_first(rules, G, max_steps):
    trace = Trace("first", [G])
    while True:
        nxt = _first_step(rules, G)
        if nxt is None:
            trace.normal_forms = [G]
            return trace
        if len(trace.steps) >= max_steps:
            trace.bound_hit = True
            trace.longest = None
            return trace
        i, step = nxt
        trace.steps.append(TraceStep(i, step))
        G = step.GR
        trace.graphs.append(G)
        trace.longest = len(trace.steps)


def _run_bfs(rules, G, max_steps):
    index = IsoIndex()
    index.add(G)
    depth = {0: 0}
    transitions: list[tuple[int, int, int]] = []
    expanded: set[int] = set()
    normal: list[int] = []
    bound_hit = False
    queue = deque([0])
    while queue:
        i = queue.popleft()
        succ = successors(rules, index.graphs[i])
        if not succ:
            normal.append(i)
            continue
        if depth[i] >= max_steps:
            bound_hit = True
            continue
        expanded.add(i)
        seen_here = set()
        for rule_index, step in succ:
            j, new = index.add(step.GR)
            if (rule_index, j) not in seen_here:
                seen_here.add((rule_index, j))
                transitions.append((i, rule_index, j))
            if new:
                depth[j] = depth[i] + 1
                queue.append(j)
    cyclic, longest = _longest_path(len(index), transitions)
    return Trace("bfs", index.graphs, transitions=transitions,
                 normal_forms=[index.graphs[i] for i in sorted(normal)],
                 bound_hit=bound_hit, cyclic=cyclic, longest=None if cyclic else longest)


def _longest_path(n: int, transitions) -> tuple[bool, int]:
    succ = [set() for _ in range(n)]
    indeg = [0] * n
    for a, _, b in transitions:
        if b not in succ[a]:
            succ[a].add(b)
            indeg[b] += 1
    order = [i for i in range(n) if indeg[i] == 0]
    dist = [0] * n
    k = 0
    while k < len(order):
        a = order[k]
        k += 1
        for b in succ[a]:
            dist[b] = max(dist[b], dist[a] + 1)
            indeg[b] -= 1
            if indeg[b] == 0:
                order.append(b)
    if len(order) < n:
        return True, 0
    return False, max(dist, default=0)

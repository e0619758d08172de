"""Pullbacks and pushouts of lattice-labeled graphs, with brute-force checks
of their universal properties."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import (GraphMorphism, LabeledGraph, MorphismError, compose, fresh_name,
                    is_mono, iter_morphisms, validate_morphism)
from .lattice import join, meet

__all__ = [
    "CospanResult", "SpanResult", "pushout", "pullback", "is_pullback_square",
    "commutes", "verify_pushout_universal", "verify_pullback_universal",
    "vertex_quotients", "small_subgraphs",
]


@dataclass(frozen=True)
class CospanResult:
    apex: LabeledGraph
    left: GraphMorphism
    right: GraphMorphism


@dataclass(frozen=True)
class SpanResult:
    apex: LabeledGraph
    left: GraphMorphism
    right: GraphMorphism


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the least element as representative for determinism
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def commutes(f1: GraphMorphism, g1: GraphMorphism, f2: GraphMorphism, g2: GraphMorphism) -> bool:
    """``g1 ∘ f1 == g2 ∘ f2`` as maps."""
    a, b = compose(f1, g1), compose(f2, g2)
    return a.vmap == b.vmap and a.emap == b.emap


def pushout(b: GraphMorphism, c: GraphMorphism) -> CospanResult:
    """Pushout of the span ``B <-b- A -c-> C`` with ``c`` monic.

    The apex is the quotient of ``B ⊎ C`` identifying ``b(x)`` with ``c(x)``;
    every element is labeled with the join of its preimages. Apex elements are
    named ``B:<id>`` or ``C:<id>`` after the least member of their class.
    """
    if b.dom != c.dom:
        raise MorphismError("pushout legs must share a domain")
    if not is_mono(c):
        raise MorphismError("pushout is only supported along a monic leg")
    B, C = b.cod, c.cod
    tagged_v = [("B", v) for v in B.vertices] + [("C", v) for v in C.vertices]
    tagged_e = [("B", e) for e in B.edges] + [("C", e) for e in C.edges]
    uv, ue = _UnionFind(tagged_v), _UnionFind(tagged_e)
    for a in b.dom.vertices:
        uv.union(("B", b.vmap[a]), ("C", c.vmap[a]))
    for a in b.dom.edges:
        ue.union(("B", b.emap[a]), ("C", c.emap[a]))

    def name(tag_id):
        return f"{tag_id[0]}:{tag_id[1]}"

    def lab_v(tag_id):
        tag, x = tag_id
        return (B if tag == "B" else C).vlabel[x]

    def edge_of(tag_id):
        tag, x = tag_id
        return (B if tag == "B" else C).edge[x]

    vclass = {x: name(uv.find(x)) for x in tagged_v}
    eclass = {x: name(ue.find(x)) for x in tagged_e}
    vlabels: dict[str, list] = {}
    for x in tagged_v:
        vlabels.setdefault(vclass[x], []).append(lab_v(x))
    edges: dict[str, list] = {}
    ends: dict[str, tuple[str, str]] = {}
    for x in tagged_e:
        s, t, lab = edge_of(x)
        k = eclass[x]
        edges.setdefault(k, []).append(lab)
        ends[k] = (vclass[(x[0], s)], vclass[(x[0], t)])
    apex = LabeledGraph(
        {k: join(v) for k, v in vlabels.items()},
        {k: (*ends[k], join(v)) for k, v in edges.items()},
    )
    left = GraphMorphism(B, apex, {v: vclass[("B", v)] for v in B.vertices},
                         {e: eclass[("B", e)] for e in B.edges})
    right = GraphMorphism(C, apex, {v: vclass[("C", v)] for v in C.vertices},
                          {e: eclass[("C", e)] for e in C.edges})
    return CospanResult(apex, left, right)


def _pair_name(p: str, q: str, taken: set) -> str:
    return fresh_name(f"{p}*{q}", taken)


def pullback(b: GraphMorphism, c: GraphMorphism) -> SpanResult:
    """Pullback of the cospan ``B -b-> X <-c- C``.

    Apex elements are the pairs ``(p, q)`` with ``b(p) = c(q)``, labeled with
    the meet of the component labels and named ``p*q``.
    """
    if b.cod != c.cod:
        raise MorphismError("pullback legs must share a codomain")
    B, C = b.dom, c.dom
    cinv_v: dict[str, list[str]] = {}
    for q in C.vertices:
        cinv_v.setdefault(c.vmap[q], []).append(q)
    cinv_e: dict[str, list[str]] = {}
    for f in C.edges:
        cinv_e.setdefault(c.emap[f], []).append(f)

    vnames: dict[tuple[str, str], str] = {}
    taken: set[str] = set()
    vl = {}
    for p in B.vertices:
        for q in cinv_v.get(b.vmap[p], ()):
            n = _pair_name(p, q, taken)
            taken.add(n)
            vnames[(p, q)] = n
            vl[n] = meet([B.vlabel[p], C.vlabel[q]])
    enames: dict[tuple[str, str], str] = {}
    etaken: set[str] = set()
    el = {}
    for e in B.edges:
        for f in cinv_e.get(b.emap[e], ()):
            n = _pair_name(e, f, etaken)
            etaken.add(n)
            enames[(e, f)] = n
            s = vnames[(B.src(e), C.src(f))]
            t = vnames[(B.tgt(e), C.tgt(f))]
            el[n] = (s, t, meet([B.elabel(e), C.elabel(f)]))
    apex = LabeledGraph(vl, el)
    left = GraphMorphism(apex, B, {n: p for (p, _), n in vnames.items()},
                         {n: e for (e, _), n in enames.items()})
    right = GraphMorphism(apex, C, {n: q for (_, q), n in vnames.items()},
                          {n: f for (_, f), n in enames.items()})
    return SpanResult(apex, left, right)


def is_pullback_square(left: GraphMorphism, right: GraphMorphism,
                       b: GraphMorphism, c: GraphMorphism) -> bool:
    """Whether ``B <-left- P -right-> C`` is a pullback of ``B -b-> X <-c- C``.

    Exact test: the square must commute and the comparison map into the
    constructed pullback must be an isomorphism (bijective and label-exact).
    """
    if left.dom != right.dom or left.cod != b.dom or right.cod != c.dom or b.cod != c.cod:
        return False
    if not commutes(left, b, right, c):
        return False
    pb = pullback(b, c)
    pair_v = {(pb.left.vmap[n], pb.right.vmap[n]): n for n in pb.apex.vertices}
    pair_e = {(pb.left.emap[n], pb.right.emap[n]): n for n in pb.apex.edges}
    P = left.dom
    cmp_v = {x: pair_v[(left.vmap[x], right.vmap[x])] for x in P.vertices}
    cmp_e = {x: pair_e[(left.emap[x], right.emap[x])] for x in P.edges}
    if len(set(cmp_v.values())) != len(pb.apex.vlabel) or len(cmp_v) != len(pb.apex.vlabel):
        return False
    if len(set(cmp_e.values())) != len(pb.apex.edge) or len(cmp_e) != len(pb.apex.edge):
        return False
    return (all(P.vlabel[x] == pb.apex.vlabel[cmp_v[x]] for x in P.vertices)
            and all(P.elabel(x) == pb.apex.elabel(cmp_e[x]) for x in P.edges))


# Brute-force universal property verifiers. Cocones/cones are enumerated
# directly; the constructions are only consulted to choose probe objects.

def _set_partitions(items: Sequence):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def vertex_quotients(G: LabeledGraph, merge_parallel: bool = False) -> list[LabeledGraph]:
    """All quotients of ``G`` by vertex partitions (labels joined).

    With ``merge_parallel`` edges that become parallel with each other are
    also identified.
    """
    out = []
    for part in _set_partitions(list(G.vertices)):
        cls = {}
        for block in part:
            rep = min(block)
            for v in block:
                cls[v] = rep
        vl = {}
        for block in part:
            vl[min(block)] = join(G.vlabel[v] for v in block)
        el = {}
        if merge_parallel:
            groups: dict[tuple, list[str]] = {}
            for e in G.edges:
                s, t, _ = G.edge[e]
                groups.setdefault((cls[s], cls[t]), []).append(e)
            for (s, t), es in groups.items():
                el[min(es)] = (s, t, join(G.elabel(e) for e in es))
        else:
            for e in G.edges:
                s, t, lab = G.edge[e]
                el[e] = (cls[s], cls[t], lab)
        out.append(LabeledGraph(vl, el))
    return out


def small_subgraphs(G: LabeledGraph, max_elements: int = 6) -> list[LabeledGraph]:
    """All subgraphs of ``G`` with at most ``max_elements`` vertices plus edges."""
    out = []
    vs = list(G.vertices)
    for k in range(0, min(len(vs), max_elements) + 1):
        for vsub in itertools.combinations(vs, k):
            vset = set(vsub)
            es = [e for e in G.edges if G.src(e) in vset and G.tgt(e) in vset]
            room = max_elements - k
            for j in range(0, min(len(es), room) + 1):
                for esub in itertools.combinations(es, j):
                    out.append(G.subgraph(vset, esub))
    return out


def _default_pushout_probes(candidate: LabeledGraph, canonical: LabeledGraph) -> list[LabeledGraph]:
    probes = [candidate, canonical]
    for g in (candidate, canonical):
        if g.size <= 6:
            probes.extend(vertex_quotients(g))
            probes.extend(vertex_quotients(g, merge_parallel=True))
    return probes


def _pins(c: GraphMorphism, target: GraphMorphism):
    """Images forced on ``c.cod`` by ``g∘c = target``; ``None`` on a clash."""
    fv, fe = {}, {}
    for x, y in c.vmap.items():
        if fv.setdefault(y, target.vmap[x]) != target.vmap[x]:
            return None
    for x, y in c.emap.items():
        if fe.setdefault(y, target.emap[x]) != target.emap[x]:
            return None
    return fv, fe


def verify_pushout_universal(span: tuple[GraphMorphism, GraphMorphism], candidate: CospanResult,
                             probes: Iterable[LabeledGraph] | None = None) -> bool:
    """Check the pushout universal property of ``candidate`` by enumeration.

    For every probe object ``Q`` and every commuting cocone ``(f, g)`` of the
    span into ``Q`` there must be exactly one ``h`` with ``h∘left = f`` and
    ``h∘right = g``. Default probes: the candidate apex, the constructed
    pushout apex, and their vertex quotients when they have at most 6 elements.
    """
    b, c = span
    if not (validate_morphism(candidate.left)[0] and validate_morphism(candidate.right)[0]):
        return False
    if candidate.left.dom != b.cod or candidate.right.dom != c.cod:
        return False
    if not commutes(b, candidate.left, c, candidate.right):
        return False
    if probes is None:
        probes = _default_pushout_probes(candidate.apex, pushout(b, c).apex)
    D = candidate.apex
    for Q in probes:
        for f in iter_morphisms(b.cod, Q):
            fb = compose(b, f)
            # g is pinned on the image of c by commutation
            pins = _pins(c, fb)
            if pins is None:
                continue
            for g in iter_morphisms(c.cod, Q, fixed_v=pins[0], fixed_e=pins[1]):
                fixed_v, fixed_e, clash = {}, {}, False
                for leg, m in ((candidate.left, f), (candidate.right, g)):
                    for x, y in leg.vmap.items():
                        if fixed_v.setdefault(y, m.vmap[x]) != m.vmap[x]:
                            clash = True
                    for x, y in leg.emap.items():
                        if fixed_e.setdefault(y, m.emap[x]) != m.emap[x]:
                            clash = True
                if clash:
                    return False
                mediators = itertools.islice(
                    iter_morphisms(D, Q, fixed_v=fixed_v, fixed_e=fixed_e), 2)
                if len(list(mediators)) != 1:
                    return False
    return True


def verify_pullback_universal(cospan: tuple[GraphMorphism, GraphMorphism], candidate: SpanResult,
                              probes: Iterable[LabeledGraph] | None = None) -> bool:
    """Dual of :func:`verify_pushout_universal`.

    Cones ``(f: Q -> B, g: Q -> C)`` with ``b∘f = c∘g`` must factor uniquely
    through the candidate apex. Default probes: the candidate apex, the
    constructed pullback apex, and their subgraphs of at most 6 elements.
    """
    b, c = cospan
    if not (validate_morphism(candidate.left)[0] and validate_morphism(candidate.right)[0]):
        return False
    if candidate.left.cod != b.dom or candidate.right.cod != c.dom:
        return False
    if not commutes(candidate.left, b, candidate.right, c):
        return False
    if probes is None:
        canonical = pullback(b, c).apex
        probes = [candidate.apex, canonical]
        for g in (candidate.apex, canonical):
            if g.size <= 10:
                probes.extend(small_subgraphs(g, 6))
    P = candidate.apex
    left, right = candidate.left, candidate.right
    for Q in probes:
        for f in iter_morphisms(Q, b.dom):
            bf = compose(f, b)
            # g must land in the fibre of c over b∘f
            gv = {x: [y for y in c.dom.vertices if c.vmap[y] == bf.vmap[x]] for x in Q.vertices}
            ge = {x: [y for y in c.dom.edges if c.emap[y] == bf.emap[x]] for x in Q.edges}
            for g in iter_morphisms(Q, c.dom, allowed_v=gv, allowed_e=ge):

                def allowed_v(x, f=f, g=g):
                    return [p for p in P.vertices
                            if left.vmap[p] == f.vmap[x] and right.vmap[p] == g.vmap[x]]

                def allowed_e(x, f=f, g=g):
                    return [p for p in P.edges
                            if left.emap[p] == f.emap[x] and right.emap[p] == g.emap[x]]

                mediators = itertools.islice(
                    iter_morphisms(Q, P, allowed_v=allowed_v, allowed_e=allowed_e), 2)
                if len(list(mediators)) != 1:
                    return False
    return True


def rename_apex(result, vnames, enames):
    """Rename the apex of a span/cospan result, adjusting both legs.

    ``vnames``/``enames`` map old apex ids to new ones and must be injective.
    """
    apex = result.apex.rename(vnames, enames)

    def v(x):
        return vnames.get(x, x)

    def e(x):
        return enames.get(x, x)

    if isinstance(result, CospanResult):
        left = GraphMorphism(result.left.dom, apex,
                             {k: v(x) for k, x in result.left.vmap.items()},
                             {k: e(x) for k, x in result.left.emap.items()})
        right = GraphMorphism(result.right.dom, apex,
                              {k: v(x) for k, x in result.right.vmap.items()},
                              {k: e(x) for k, x in result.right.emap.items()})
        return CospanResult(apex, left, right)
    inv_v = {v(k): k for k in result.apex.vlabel}
    inv_e = {e(k): k for k in result.apex.edge}
    left = GraphMorphism(apex, result.left.cod,
                         {k: result.left.vmap[inv_v[k]] for k in apex.vlabel},
                         {k: result.left.emap[inv_e[k]] for k in apex.edge})
    right = GraphMorphism(apex, result.right.cod,
                          {k: result.right.vmap[inv_v[k]] for k in apex.vlabel},
                          {k: result.right.emap[inv_e[k]] for k in apex.edge})
    return SpanResult(apex, left, right)


def untagged_names(result: CospanResult, prefer: str = "C"):
    """Renaming of a pushout apex that strips the ``B:``/``C:`` origin tags.

    Classes containing a member from the ``prefer`` side take that member's
    name; clashes are resolved with ``#k`` suffixes.
    """
    other = "B" if prefer == "C" else "C"
    out = []
    for kind, ids, legs in (("v", result.apex.vertices, "vmap"), ("e", result.apex.edges, "emap")):
        members: dict[str, dict[str, list[str]]] = {x: {"B": [], "C": []} for x in ids}
        for side, leg in (("B", result.left), ("C", result.right)):
            for src, img in getattr(leg, legs).items():
                members[img][side].append(src)
        table, taken = {}, set()
        # preferred-side names first so they survive unchanged
        for side in (prefer, other):
            for x in ids:
                if x in table or not members[x][side]:
                    continue
                if side == other and members[x][prefer]:
                    continue
                name = fresh_name(min(members[x][side]), taken)
                table[x] = name
                taken.add(name)
        out.append(table)
    return out[0], out[1]

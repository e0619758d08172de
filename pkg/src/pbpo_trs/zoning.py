"""Undirected cycles, node well-formedness and zonings of labeled graphs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import GraphMorphism, LabeledGraph
from .lattice import BOTTOM, Label, Signature
from .terms import Term

__all__ = [
    "undirected_cycle_edges", "drop_cycles", "undirected_path", "cycle_through",
    "NodeClass", "classify_nodes", "bad_nodes", "Zoning", "compute_zoning",
    "relabel_bad_nodes", "zone_subgraph", "zone_to_term", "check_match_in_one_zone",
    "is_acyclic", "ZoneError",
]


class ZoneError(ValueError):
    pass


def undirected_path(G: LabeledGraph, start: str, goal: str, avoid: str | None = None) -> list[str] | None:
    """Edges of a shortest undirected path from ``start`` to ``goal`` not using ``avoid``."""
    if start == goal:
        return []
    prev: dict[str, tuple[str, str]] = {start: ("", "")}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for e in G.out_edges[v] + G.in_edges[v]:
            if e == avoid:
                continue
            s, t, _ = G.edge[e]
            w = t if s == v else s
            if w not in prev:
                prev[w] = (v, e)
                if w == goal:
                    path = []
                    while w != start:
                        w, e2 = prev[w]
                        path.append(e2)
                    return path[::-1]
                queue.append(w)
    return None


def undirected_cycle_edges(G: LabeledGraph) -> set[str]:
    """Edges lying on an undirected cycle.

    An edge qualifies iff its endpoints stay connected once it is removed;
    loops always qualify.
    """
    out = set()
    for e in G.edges:
        s, t, _ = G.edge[e]
        if s == t or undirected_path(G, s, t, avoid=e) is not None:
            out.add(e)
    return out


def cycle_through(G: LabeledGraph, e: str) -> list[str] | None:
    """The edges of some undirected cycle containing ``e``, or ``None``."""
    s, t, _ = G.edge[e]
    if s == t:
        return [e]
    path = undirected_path(G, s, t, avoid=e)
    return None if path is None else [e] + path


def drop_cycles(G: LabeledGraph) -> LabeledGraph:
    return G.without_edges(undirected_cycle_edges(G))


def is_acyclic(G: LabeledGraph) -> bool:
    """No directed cycle (loops count as cycles)."""
    indeg = {v: len(G.in_edges[v]) for v in G.vertices}
    queue = deque(v for v in G.vertices if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for e in G.out_edges[v]:
            w = G.tgt(e)
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(G.vlabel)


@dataclass(frozen=True)
class NodeClass:
    in_wf: bool
    out_wf: bool
    good: bool


def classify_nodes(sig: Signature, G: LabeledGraph) -> dict[str, NodeClass]:
    in_wf = {v: len(G.in_edges[v]) <= 1 for v in G.vertices}
    out = {}
    for v in G.vertices:
        arity = sig.arity_of(G.vlabel[v])
        o = False
        if arity is not None:
            labels = [G.elabel(e) for e in G.out_edges[v]]
            o = (len(labels) == arity
                 and all(lab.is_int for lab in labels)
                 and sorted(lab.value for lab in labels) == list(range(1, arity + 1)))
        good = o and all(in_wf[w] for w in G.children(v))
        out[v] = NodeClass(in_wf[v], o, good)
    return out


def bad_nodes(sig: Signature, G: LabeledGraph) -> set[str]:
    return {v for v, c in classify_nodes(sig, G).items() if not c.good}


@dataclass(frozen=True)
class Zoning:
    zone_of_vertex: Mapping[str, str]
    zone_edges: Mapping[str, frozenset]
    bridges: frozenset
    roots: Mapping[str, str | None]

    def zones(self) -> list[str]:
        return sorted(self.zone_edges)

    def zone_vertices(self, z: str) -> set[str]:
        return {v for v, k in self.zone_of_vertex.items() if k == z}

    def partition(self) -> set[frozenset]:
        """Zones as ``(vertices, edges)`` pairs, independent of zone ids."""
        return {frozenset([("v", v) for v in self.zone_vertices(z)] +
                          [("e", e) for e in self.zone_edges[z]]) for z in self.zones()}


def compute_zoning(sig: Signature, G: LabeledGraph, edge_order: Sequence[str] | None = None) -> Zoning:
    """Grow zones from singletons by joining along edges with a good source.

    ``edge_order`` fixes the worklist order (default: sorted ids); the result
    does not depend on it. Zone ids are the least vertex id in each zone.
    """
    cls = classify_nodes(sig, G)
    parent = {v: v for v in G.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    included: set[str] = set()
    order = list(G.edges) if edge_order is None else list(edge_order)
    changed = True
    while changed:
        changed = False
        for e in order:
            if e in included:
                continue
            s, t, _ = G.edge[e]
            if cls[s].good:
                a, b = find(s), find(t)
                if a != b:
                    parent[max(a, b)] = min(a, b)
                included.add(e)
                changed = True
    groups: dict[str, list[str]] = {}
    for v in G.vertices:
        groups.setdefault(find(v), []).append(v)
    zone_of = {}
    for members in groups.values():
        zid = min(members)
        for v in members:
            zone_of[v] = zid
    zone_edges: dict[str, set] = {z: set() for z in zone_of.values()}
    for e in included:
        zone_edges[zone_of[G.src(e)]].add(e)
    bridges = frozenset(set(G.edges) - included)
    roots = {}
    for z, es in zone_edges.items():
        vs = [v for v in G.vertices if zone_of[v] == z]
        targets = {G.tgt(e) for e in es}
        cand = [v for v in vs if v not in targets]
        roots[z] = cand[0] if len(cand) == 1 else None
    return Zoning(zone_of, {z: frozenset(es) for z, es in zone_edges.items()}, bridges, roots)


def zone_subgraph(G: LabeledGraph, zoning: Zoning, z: str) -> LabeledGraph:
    return G.subgraph(zoning.zone_vertices(z), zoning.zone_edges[z])


def relabel_bad_nodes(sig: Signature, G: LabeledGraph, to: Label = BOTTOM) -> LabeledGraph:
    return G.with_vertex_labels({v: to for v in bad_nodes(sig, G)})


def zone_to_term(sig: Signature, G: LabeledGraph, zoning: Zoning, z: str) -> Term | None:
    """Decode zone ``z`` after relabeling its bad nodes with ``BOTTOM``.

    Raises :class:`ZoneError` for a zone with a directed cycle.
    """
    from .encoding import decode_term
    Z = zone_subgraph(G, zoning, z)
    if not is_acyclic(Z):
        raise ZoneError(f"zone {z} has a directed cycle")
    bad = bad_nodes(sig, G) & set(Z.vlabel)
    Z = Z.with_vertex_labels({v: BOTTOM for v in bad})
    return decode_term(Z, sig, root=zoning.roots[z])


def check_match_in_one_zone(erule, G: LabeledGraph, m: GraphMorphism, zoning: Zoning | None = None) -> bool:
    """Whether the image of the lhs pattern lies inside a single zone."""
    sig = _signature_of(erule)
    zoning = zoning or compute_zoning(sig, G)
    zones = {zoning.zone_of_vertex[v] for v in m.vmap.values()}
    if len(zones) != 1:
        return False
    z = zones.pop()
    return all(d in zoning.zone_edges[z] for d in m.emap.values())


def _signature_of(erule) -> Signature:
    if erule.signature is None:
        raise ZoneError("encoded rule carries no signature")
    return erule.signature

"""Lattice-labeled graphs, morphisms, and morphism search."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping

from .lattice import Label, leq

__all__ = [
    "LabeledGraph", "GraphMorphism", "RootedGraph", "MorphismError",
    "identity", "compose", "validate_morphism", "is_mono",
    "iter_morphisms", "enumerate_morphisms", "are_isomorphic", "fresh_name",
]


class MorphismError(ValueError):
    pass


def _freeze(d):
    return MappingProxyType(dict(d))


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """Immutable finite graph with a label on every vertex and edge.

    ``vlabel`` maps vertex id to label; ``edge`` maps edge id to a
    ``(source, target, label)`` triple. Identifiers are strings.
    """

    vlabel: Mapping[str, Label]
    edge: Mapping[str, tuple[str, str, Label]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vlabel", _freeze(self.vlabel))
        object.__setattr__(self, "edge", _freeze(self.edge))
        for v, lab in self.vlabel.items():
            if not isinstance(v, str):
                raise TypeError(f"vertex id must be str, got {v!r}")
            if not isinstance(lab, Label):
                raise TypeError(f"vertex {v} has non-label {lab!r}")
        for e, triple in self.edge.items():
            if not isinstance(e, str):
                raise TypeError(f"edge id must be str, got {e!r}")
            s, t, lab = triple
            if s not in self.vlabel or t not in self.vlabel:
                raise ValueError(f"edge {e} has dangling endpoint ({s}, {t})")
            if not isinstance(lab, Label):
                raise TypeError(f"edge {e} has non-label {lab!r}")

    @classmethod
    def build(cls, vertices: Iterable[tuple[str, Label]] = (),
              edges: Iterable[tuple[str, str, str, Label]] = ()) -> "LabeledGraph":
        """Build from ``(id, label)`` vertices and ``(id, src, tgt, label)`` edges."""
        vl: dict[str, Label] = {}
        for v, lab in vertices:
            if v in vl:
                raise ValueError(f"duplicate vertex {v}")
            vl[v] = lab
        ed: dict[str, tuple[str, str, Label]] = {}
        for e, s, t, lab in edges:
            if e in ed:
                raise ValueError(f"duplicate edge {e}")
            ed[e] = (s, t, lab)
        return cls(vl, ed)

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return dict(self.vlabel) == dict(other.vlabel) and dict(self.edge) == dict(other.edge)

    def __hash__(self):
        return hash((frozenset(self.vlabel.items()), frozenset(self.edge.items())))

    def __repr__(self):
        vs = ", ".join(f"{v}^{lab}" for v, lab in sorted(self.vlabel.items()))
        es = ", ".join(f"{e}:{s}->{t}^{lab}" for e, (s, t, lab) in sorted(self.edge.items()))
        return f"LabeledGraph([{vs}], [{es}])"

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self.vlabel))

    @cached_property
    def edges(self) -> tuple[str, ...]:
        return tuple(sorted(self.edge))

    def src(self, e: str) -> str:
        return self.edge[e][0]

    def tgt(self, e: str) -> str:
        return self.edge[e][1]

    def elabel(self, e: str) -> Label:
        return self.edge[e][2]

    def label(self, x: str, *, is_edge: bool = False) -> Label:
        return self.edge[x][2] if is_edge else self.vlabel[x]

    @property
    def size(self) -> int:
        return len(self.vlabel) + len(self.edge)

    @cached_property
    def out_edges(self) -> Mapping[str, tuple[str, ...]]:
        out = defaultdict(list)
        for e in self.edges:
            out[self.edge[e][0]].append(e)
        return {v: tuple(out.get(v, ())) for v in self.vertices}

    @cached_property
    def in_edges(self) -> Mapping[str, tuple[str, ...]]:
        inc = defaultdict(list)
        for e in self.edges:
            inc[self.edge[e][1]].append(e)
        return {v: tuple(inc.get(v, ())) for v in self.vertices}

    @cached_property
    def between(self) -> Mapping[tuple[str, str], tuple[str, ...]]:
        """Edges grouped by ``(source, target)``."""
        table = defaultdict(list)
        for e in self.edges:
            s, t, _ = self.edge[e]
            table[(s, t)].append(e)
        return {k: tuple(v) for k, v in table.items()}

    def degree(self, v: str) -> int:
        return len(self.out_edges[v]) + len(self.in_edges[v])

    def children(self, v: str) -> list[str]:
        return [self.edge[e][1] for e in self.out_edges[v]]

    # Construction helpers; graphs are values, so these all return new graphs.

    def with_vertex_labels(self, relabel: Mapping[str, Label]) -> "LabeledGraph":
        vl = dict(self.vlabel)
        for v, lab in relabel.items():
            if v in vl:
                vl[v] = lab
        return LabeledGraph(vl, self.edge)

    def without_edges(self, drop: Iterable[str]) -> "LabeledGraph":
        drop = set(drop)
        return LabeledGraph(self.vlabel, {e: t for e, t in self.edge.items() if e not in drop})

    def subgraph(self, vertices: Iterable[str], edges: Iterable[str] | None = None) -> "LabeledGraph":
        """Subgraph on ``vertices``; all induced edges unless ``edges`` is given."""
        vs = set(vertices)
        if edges is None:
            es = [e for e, (s, t, _) in self.edge.items() if s in vs and t in vs]
        else:
            es = list(edges)
        return LabeledGraph({v: self.vlabel[v] for v in vs}, {e: self.edge[e] for e in es})

    def rename(self, vnames: Mapping[str, str], enames: Mapping[str, str]) -> "LabeledGraph":
        """Apply injective identifier renamings (missing keys keep their name)."""
        vn = {v: vnames.get(v, v) for v in self.vlabel}
        en = {e: enames.get(e, e) for e in self.edge}
        if len(set(vn.values())) != len(vn) or len(set(en.values())) != len(en):
            raise ValueError("renaming is not injective")
        return LabeledGraph(
            {vn[v]: lab for v, lab in self.vlabel.items()},
            {en[e]: (vn[s], vn[t], lab) for e, (s, t, lab) in self.edge.items()},
        )

    def disjoint_union(self, other: "LabeledGraph") -> "LabeledGraph":
        if set(self.vlabel) & set(other.vlabel) or set(self.edge) & set(other.edge):
            raise ValueError("identifier clash in disjoint union")
        return LabeledGraph({**self.vlabel, **other.vlabel}, {**self.edge, **other.edge})

    def invariant_key(self):
        """Isomorphism invariant used to bucket graphs before exact checks."""
        vl = sorted(lab.sort_key() for lab in self.vlabel.values())
        el = sorted(lab.sort_key() for _, _, lab in self.edge.values())
        deg = sorted((len(self.in_edges[v]), len(self.out_edges[v]), self.vlabel[v].sort_key())
                     for v in self.vertices)
        return (len(self.vlabel), len(self.edge), tuple(vl), tuple(el), tuple(deg))


@dataclass(frozen=True)
class RootedGraph:
    graph: LabeledGraph
    root: str

    def __post_init__(self):
        if self.root not in self.graph.vlabel:
            raise ValueError(f"root {self.root} is not a vertex")


@dataclass(frozen=True, eq=False)
class GraphMorphism:
    dom: LabeledGraph
    cod: LabeledGraph
    vmap: Mapping[str, str]
    emap: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "vmap", _freeze(self.vmap))
        object.__setattr__(self, "emap", _freeze(self.emap))

    def __eq__(self, other):
        if not isinstance(other, GraphMorphism):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and dict(self.vmap) == dict(other.vmap) and dict(self.emap) == dict(other.emap))

    def __hash__(self):
        return hash((frozenset(self.vmap.items()), frozenset(self.emap.items())))

    def __repr__(self):
        vm = ", ".join(f"{k}->{v}" for k, v in sorted(self.vmap.items()))
        em = ", ".join(f"{k}->{v}" for k, v in sorted(self.emap.items()))
        return f"GraphMorphism(v: {{{vm}}}, e: {{{em}}})"

    def __call__(self, x: str, *, is_edge: bool = False) -> str:
        return self.emap[x] if is_edge else self.vmap[x]

    def key(self):
        """Hashable description of the maps, for comparing morphisms with equal ends."""
        return (tuple(sorted(self.vmap.items())), tuple(sorted(self.emap.items())))

    def then(self, other: "GraphMorphism") -> "GraphMorphism":
        return compose(self, other)

    def image(self) -> tuple[set[str], set[str]]:
        return set(self.vmap.values()), set(self.emap.values())


def identity(g: LabeledGraph) -> GraphMorphism:
    return GraphMorphism(g, g, {v: v for v in g.vlabel}, {e: e for e in g.edge})


def compose(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """``g ∘ f``: first ``f``, then ``g``."""
    if f.cod != g.dom:
        raise MorphismError("codomain of the first morphism is not the domain of the second")
    return GraphMorphism(
        f.dom, g.cod,
        {v: g.vmap[w] for v, w in f.vmap.items()},
        {e: g.emap[d] for e, d in f.emap.items()},
    )


def validate_morphism(f: GraphMorphism) -> tuple[bool, list[str]]:
    """Check totality, the premorphism law and label monotonicity.

    Returns ``(ok, problems)`` where ``problems`` lists the violated clauses.
    """
    problems: list[str] = []
    A, B = f.dom, f.cod
    for v in A.vertices:
        if v not in f.vmap:
            problems.append(f"totality: vertex {v} unmapped")
        elif f.vmap[v] not in B.vlabel:
            problems.append(f"totality: vertex {v} maps outside codomain")
    for e in A.edges:
        if e not in f.emap:
            problems.append(f"totality: edge {e} unmapped")
        elif f.emap[e] not in B.edge:
            problems.append(f"totality: edge {e} maps outside codomain")
    if set(f.vmap) - set(A.vlabel) or set(f.emap) - set(A.edge):
        problems.append("totality: map defined outside domain")
    if problems:
        return False, problems
    for e in A.edges:
        s, t, lab = A.edge[e]
        s2, t2, lab2 = B.edge[f.emap[e]]
        if (f.vmap[s], f.vmap[t]) != (s2, t2):
            problems.append(f"premorphism: edge {e} endpoints do not commute")
        if not leq(lab, lab2):
            problems.append(f"labels: edge {e} label {lab} not <= {lab2}")
    for v in A.vertices:
        if not leq(A.vlabel[v], B.vlabel[f.vmap[v]]):
            problems.append(f"labels: vertex {v} label {A.vlabel[v]} not <= {B.vlabel[f.vmap[v]]}")
    return not problems, problems


def is_mono(f: GraphMorphism) -> bool:
    return (len(set(f.vmap.values())) == len(f.vmap)
            and len(set(f.emap.values())) == len(f.emap))


def _search_order(A: LabeledGraph, first: Iterable[str]) -> list[str]:
    # fixed vertices first, then greedily the vertex most connected to the placed ones
    order = [v for v in first]
    placed = set(order)
    rest = [v for v in A.vertices if v not in placed]
    nbrs = {v: set() for v in A.vertices}
    for s, t, _ in A.edge.values():
        nbrs[s].add(t)
        nbrs[t].add(s)
    while rest:
        best = max(rest, key=lambda v: (len(nbrs[v] & placed), A.degree(v), _neg(v)))
        order.append(best)
        placed.add(best)
        rest.remove(best)
    return order


def _neg(s: str):
    # max() over ids should prefer the lexicographically smallest
    return tuple(-ord(c) for c in s) + (1,)


def iter_morphisms(
    A: LabeledGraph,
    B: LabeledGraph,
    *,
    mono: bool = False,
    exact_labels: bool = False,
    bijective: bool = False,
    fixed_v: Mapping[str, str] | None = None,
    fixed_e: Mapping[str, str] | None = None,
    allowed_v: Callable[[str], Iterable[str] | None] | Mapping[str, Iterable[str]] | None = None,
    allowed_e: Callable[[str], Iterable[str] | None] | Mapping[str, Iterable[str]] | None = None,
) -> Iterator[GraphMorphism]:
    """Backtracking search for morphisms ``A -> B``.

    ``fixed_v``/``fixed_e`` pin images; ``allowed_v``/``allowed_e`` restrict the
    candidate images of individual elements (a mapping, or a function returning
    ``None`` for "unrestricted"). With ``exact_labels`` labels must be equal
    rather than non-decreasing; ``bijective`` (sizes must already agree) adds
    degree pruning for isomorphism search. Results come in a deterministic order.
    """
    mono = mono or bijective
    fixed_v = dict(fixed_v or {})
    fixed_e = dict(fixed_e or {})
    lab_ok = (lambda a, b: a == b) if exact_labels else leq

    def allowed(restriction, x):
        if restriction is None:
            return None
        if callable(restriction):
            r = restriction(x)
        else:
            r = restriction.get(x)
        return None if r is None else set(r)

    if mono and (len(A.vlabel) > len(B.vlabel) or len(A.edge) > len(B.edge)):
        return

    # fixed edges imply fixed endpoints
    for e, d in fixed_e.items():
        if d not in B.edge:
            return
        s, t, _ = A.edge[e]
        s2, t2, _ = B.edge[d]
        for a, b in ((s, s2), (t, t2)):
            if fixed_v.setdefault(a, b) != b:
                return

    vcands: dict[str, list[str]] = {}
    for v in A.vertices:
        lab = A.vlabel[v]
        nloops = len(A.between.get((v, v), ()))
        if v in fixed_v:
            pool = [fixed_v[v]] if fixed_v[v] in B.vlabel else []
        else:
            pool = B.vertices
        extra = allowed(allowed_v, v)
        cands = []
        for w in pool:
            if extra is not None and w not in extra:
                continue
            if not lab_ok(lab, B.vlabel[w]):
                continue
            if nloops:
                bl = B.between.get((w, w), ())
                if not bl or (mono and len(bl) < nloops):
                    continue
            if bijective and (len(A.in_edges[v]) != len(B.in_edges[w])
                                 or len(A.out_edges[v]) != len(B.out_edges[w])):
                continue
            cands.append(w)
        if not cands:
            return
        vcands[v] = cands

    order = _search_order(A, [v for v in A.vertices if v in fixed_v])
    pos = {v: i for i, v in enumerate(order)}
    # for each vertex, the A-edge groups linking it to earlier vertices (incl. loops)
    back_links: dict[str, list[tuple[str, str, tuple[str, ...]]]] = {v: [] for v in order}
    for (s, t), es in A.between.items():
        later = s if pos[s] >= pos[t] else t
        back_links[later].append((s, t, es))

    def edge_cands(e: str, s2: str, t2: str) -> list[str]:
        lab = A.edge[e][2]
        if e in fixed_e:
            pool = [fixed_e[e]] if B.edge[fixed_e[e]][:2] == (s2, t2) else []
        else:
            pool = B.between.get((s2, t2), ())
        extra = allowed(allowed_e, e)
        return [d for d in pool
                if lab_ok(lab, B.edge[d][2]) and (extra is None or d in extra)]

    vmap: dict[str, str] = {}
    used_v: set[str] = set()

    def feasible(v: str) -> bool:
        for s, t, es in back_links[v]:
            s2, t2 = vmap[s], vmap[t]
            if mono:
                pool = set()
                for e in es:
                    c = edge_cands(e, s2, t2)
                    if not c:
                        return False
                    pool.update(c)
                if len(pool) < len(es):
                    return False
            else:
                for e in es:
                    if not edge_cands(e, s2, t2):
                        return False
        return True

    edge_list = list(A.edges)

    def assign_edges(i: int, emap: dict[str, str], used_e: set[str]):
        if i == len(edge_list):
            yield dict(emap)
            return
        e = edge_list[i]
        s, t, _ = A.edge[e]
        for d in edge_cands(e, vmap[s], vmap[t]):
            if mono and d in used_e:
                continue
            emap[e] = d
            if mono:
                used_e.add(d)
            yield from assign_edges(i + 1, emap, used_e)
            if mono:
                used_e.discard(d)
            del emap[e]

    def assign_vertices(i: int):
        if i == len(order):
            for emap in assign_edges(0, {}, set()):
                yield GraphMorphism(A, B, dict(vmap), emap)
            return
        v = order[i]
        for w in vcands[v]:
            if mono and w in used_v:
                continue
            vmap[v] = w
            if feasible(v):
                if mono:
                    used_v.add(w)
                yield from assign_vertices(i + 1)
                if mono:
                    used_v.discard(w)
            del vmap[v]

    yield from assign_vertices(0)


def enumerate_morphisms(A: LabeledGraph, B: LabeledGraph, mono_only: bool = False,
                        **constraints) -> list[GraphMorphism]:
    return list(iter_morphisms(A, B, mono=mono_only, **constraints))


def are_isomorphic(A: LabeledGraph, B: LabeledGraph) -> GraphMorphism | None:
    """A label-preserving bijective morphism ``A -> B``, or ``None``."""
    if len(A.vlabel) != len(B.vlabel) or len(A.edge) != len(B.edge):
        return None
    if A.invariant_key() != B.invariant_key():
        return None
    return next(iter_morphisms(A, B, exact_labels=True, bijective=True), None)


def inverse(f: GraphMorphism) -> GraphMorphism:
    """Inverse of an isomorphism."""
    if not is_mono(f) or len(f.vmap) != len(f.cod.vlabel) or len(f.emap) != len(f.cod.edge):
        raise MorphismError("not a bijection")
    return GraphMorphism(f.cod, f.dom, {w: v for v, w in f.vmap.items()},
                         {d: e for e, d in f.emap.items()})


def fresh_name(base: str, taken) -> str:
    """``base`` if unused, else ``base#k`` for the least free ``k >= 1``."""
    if base not in taken:
        return base
    stem = base.split("#", 1)[0] if "#" in base else base
    k = 1
    while f"{stem}#{k}" in taken:
        k += 1
    return f"{stem}#{k}"

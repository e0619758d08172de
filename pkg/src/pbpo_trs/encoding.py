"""Encoding linear terms and rules as lattice-labeled graphs and PBPO+ rules."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .catops import CospanResult, pushout, rename_apex, untagged_names
from .engine import PbpoRule
from .graph import GraphMorphism, LabeledGraph, RootedGraph, fresh_name
from .lattice import BOTTOM, TOP, Label, Signature, base, is_identifier
from .terms import (App, Position, Term, TermError, Trs, TrsRule, Var, check_term,
                    format_position, is_linear, positions, subterm_at, variables)

__all__ = [
    "TermEncoding", "EncodedRule", "EncodingError", "encode_term", "decode_term",
    "upper_context_closure", "lower_context_closure", "interface_graph",
    "encode_rule", "encode_system", "positions_in_graph", "edge_id",
]


class EncodingError(ValueError):
    pass


def edge_id(s: str, t: str) -> str:
    return f"{s}>{t}"


@dataclass(frozen=True)
class TermEncoding:
    rooted: RootedGraph
    position_of: Mapping[str, Position]
    variable_heads: frozenset

    @property
    def graph(self) -> LabeledGraph:
        return self.rooted.graph

    @property
    def root(self) -> str:
        return self.rooted.root

    def vertex_at(self, p: Position) -> str | None:
        for v, q in self.position_of.items():
            if q == tuple(p):
                return v
        return None


def _variable_vertex_names(terms: Iterable[Term], names: Mapping[str, str] | None = None) -> dict[str, str]:
    reserved = set()
    vs = []
    for t in terms:
        for p in positions(t):
            if isinstance(subterm_at(t, p), App):
                reserved.add(format_position(p))
        vs.extend(variables(t))
    table = dict(names or {})
    taken = reserved | set(table.values())
    for x in vs:
        if x not in table:
            table[x] = fresh_name(x, taken)
            taken.add(table[x])
    return table


def encode_term(sig: Signature, t: Term, var_names: Mapping[str, str] | None = None) -> TermEncoding:
    """Encode a linear term as a rooted tree.

    Symbol occurrences become vertices named by their position (``eps``,
    ``1``, ``21``, ...) and labeled with the symbol; variables become
    ``BOTTOM``-labeled leaves named after the variable. The edge to the i-th
    argument is labeled ``i`` and named ``src>tgt``.
    """
    if not is_linear(t):
        raise EncodingError(f"term {t} is not linear")
    try:
        check_term(sig, t)
    except TermError as exc:
        raise EncodingError(str(exc)) from None
    vnames = _variable_vertex_names([t], var_names)
    vl: dict[str, Label] = {}
    ed: dict[str, tuple] = {}
    pos_of: dict[str, Position] = {}
    heads = set()

    def walk(u: Term, p: Position) -> str:
        if isinstance(u, Var):
            v = vnames[u.name]
            vl[v] = BOTTOM
            heads.add(v)
        else:
            v = format_position(p)
            vl[v] = base(u.symbol)
            for i, a in enumerate(u.args, 1):
                w = walk(a, p + (i,))
                ed[edge_id(v, w)] = (v, w, base(i))
        pos_of[v] = p
        return v

    root = walk(t, ())
    return TermEncoding(RootedGraph(LabeledGraph(vl, ed), root), pos_of, frozenset(heads))


def positions_in_graph(g: LabeledGraph, root: str) -> dict[str, Position]:
    """Positions of vertices reachable from ``root`` along integer-labeled edges."""
    out = {root: ()}
    stack = [root]
    while stack:
        v = stack.pop()
        for e in g.out_edges[v]:
            lab = g.elabel(e)
            w = g.tgt(e)
            if lab.is_int and w not in out:
                out[w] = out[v] + (lab.value,)
                stack.append(w)
    return out


def decode_term(g: LabeledGraph | RootedGraph | TermEncoding, sig: Signature | None = None,
                root: str | None = None) -> Term | None:
    """Invert :func:`encode_term`, or ``None`` if ``g`` is not a term encoding.

    Without a root the unique vertex with no incoming edges is used.
    ``BOTTOM`` leaves become variables named after their vertex when that is a
    valid, unused identifier, otherwise ``x1``, ``x2``, ... left to right.
    """
    if isinstance(g, TermEncoding):
        g = g.rooted
    if isinstance(g, RootedGraph):
        root = g.root if root is None else root
        g = g.graph
    if root is None:
        sources = [v for v in g.vertices if not g.in_edges[v]]
        if len(sources) != 1:
            return None
        root = sources[0]
    if root not in g.vlabel or g.in_edges[root]:
        return None
    # tree check: every other vertex has exactly one parent and is reachable
    for v in g.vertices:
        if v != root and len(g.in_edges[v]) != 1:
            return None
    reach = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for w in g.children(v):
            if w in reach:
                return None
            reach.add(w)
            stack.append(w)
    if len(reach) != len(g.vlabel):
        return None

    leaves: list[str] = []

    def collect(v):
        lab = g.vlabel[v]
        outs = g.out_edges[v]
        if lab.is_bottom:
            if outs:
                return False
            leaves.append(v)
            return True
        if not lab.is_symbol:
            return False
        if sig is not None and sig.get(lab.value) != len(outs):
            return False
        by_index = {}
        for e in outs:
            el = g.elabel(e)
            if not el.is_int or el.value in by_index:
                return False
            by_index[el.value] = g.tgt(e)
        if set(by_index) != set(range(1, len(outs) + 1)):
            return False
        return all(collect(by_index[i]) for i in range(1, len(outs) + 1))

    if not collect(root):
        return None
    symbols = {g.vlabel[v].value for v in g.vertices if g.vlabel[v].is_symbol}
    if sig is not None:
        symbols |= set(sig)
    names: dict[str, str] = {}
    used = set()
    for v in leaves:
        if is_identifier(v) and v not in symbols and v not in used:
            names[v] = v
            used.add(v)
    k = 0
    for v in leaves:
        if v not in names:
            k += 1
            while f"x{k}" in used or f"x{k}" in symbols:
                k += 1
            names[v] = f"x{k}"
            used.add(names[v])

    def build(v):
        lab = g.vlabel[v]
        if lab.is_bottom:
            return Var(names[v])
        kids = {g.elabel(e).value: g.tgt(e) for e in g.out_edges[v]}
        return App(lab.value, tuple(build(kids[i]) for i in range(1, len(kids) + 1)))

    return build(root)


def upper_context_closure(rg: RootedGraph, name: str = "C") -> RootedGraph:
    """Add a ``TOP`` vertex above the root, with a ``TOP`` edge to the root and a ``TOP`` loop."""
    g = rg.graph
    if name in g.vlabel:
        raise EncodingError(f"context vertex {name} already exists")
    vl = dict(g.vlabel)
    vl[name] = TOP
    ed = dict(g.edge)
    for s, t in ((name, rg.root), (name, name)):
        e = edge_id(s, t)
        if e in ed:
            raise EncodingError(f"edge {e} already exists")
        ed[e] = (s, t, TOP)
    return RootedGraph(LabeledGraph(vl, ed), rg.root)


def lower_context_closure(rg: RootedGraph, X: Iterable[str]) -> RootedGraph:
    """Relabel each ``x`` in ``X`` to ``TOP`` and hang a looped ``TOP`` vertex ``x'`` below it."""
    g = rg.graph
    vl = dict(g.vlabel)
    ed = dict(g.edge)
    for x in sorted(set(X)):
        if x not in vl:
            raise EncodingError(f"{x} is not a vertex")
        xp = x + "'"
        if xp in vl:
            raise EncodingError(f"primed vertex {xp} already exists")
        vl[x] = TOP
        vl[xp] = TOP
        for s, t in ((x, xp), (xp, xp)):
            e = edge_id(s, t)
            if e in ed:
                raise EncodingError(f"edge {e} already exists")
            ed[e] = (s, t, TOP)
    return RootedGraph(LabeledGraph(vl, ed), rg.root)


def interface_graph(r: Term, var_names: Mapping[str, str] | None = None) -> RootedGraph:
    """Discrete ``BOTTOM``-labeled graph on ``eps`` and the variables of ``r``."""
    names = _variable_vertex_names([r], var_names)
    root = fresh_name("eps", set(names.values()))
    vl = {root: BOTTOM}
    for x in variables(r):
        vl[names[x]] = BOTTOM
    return RootedGraph(LabeledGraph(vl), root)


@dataclass(frozen=True)
class EncodedRule:
    rule: PbpoRule
    source_rule: TrsRule
    l_encoding: TermEncoding
    r_encoding: TermEncoding
    context_vertex: str = "C"
    signature: Signature | None = None

    def r_prime(self) -> CospanResult:
        """Pushout of ``K' <- K -> R``: the schematic effect of the rule."""
        po = pushout(self.rule.r, self.rule.tK)
        vn, en = untagged_names(po, prefer="B")
        return rename_apex(po, vn, en)


def encode_rule(sig: Signature, rho: TrsRule) -> EncodedRule:
    l, r = rho.lhs, rho.rhs
    if isinstance(l, Var):
        raise EncodingError("left-hand side must not be a variable")
    if not (is_linear(l) and is_linear(r)):
        raise EncodingError(f"rule {rho} is not linear")
    names = _variable_vertex_names([l, r])
    L_enc = encode_term(sig, l, names)
    R_enc = encode_term(sig, r, names)
    K_rooted = interface_graph(r, names)
    all_names = set(L_enc.graph.vlabel) | set(R_enc.graph.vlabel) | set(K_rooted.graph.vlabel)
    all_names |= {v + "'" for v in all_names}
    cname = fresh_name("C", all_names)

    lvars = [names[x] for x in variables(l)]
    rvars = [names[x] for x in variables(r)]
    Lp_rooted = upper_context_closure(lower_context_closure(L_enc.rooted, lvars), cname)
    Kp_rooted = upper_context_closure(lower_context_closure(K_rooted, rvars), cname)
    L, K, R = L_enc.graph, K_rooted.graph, R_enc.graph
    Lp, Kp = Lp_rooted.graph, Kp_rooted.graph
    k_root, l_root, r_root = K_rooted.root, L_enc.root, R_enc.root

    def incl(A, B, roots=None):
        roots = roots or {}
        vm = {v: roots.get(v, v) for v in A.vertices}
        em = {}
        for e in A.edges:
            s, t, _ = A.edge[e]
            em[e] = edge_id(vm[s], vm[t])
        return GraphMorphism(A, B, vm, em)

    tL = incl(L, Lp)
    tK = incl(K, Kp)
    l_m = incl(K, L, {k_root: l_root})
    r_m = incl(K, R, {k_root: r_root})
    lp = incl(Kp, Lp, {k_root: l_root})
    rule = PbpoRule(L, K, R, Lp, Kp, l_m, r_m, lp, tL, tK)
    problems = rule.validate()
    if problems:
        raise EncodingError("encoded rule is inconsistent: " + "; ".join(problems))
    return EncodedRule(rule, rho, L_enc, R_enc, cname, sig)


def encode_system(trs: Trs) -> list[EncodedRule]:
    return [encode_rule(trs.signature, rho) for rho in trs.rules]

"""Random terms, rules, graphs and morphisms for property checks."""
from __future__ import annotations

import random
from typing import Sequence

from .graph import GraphMorphism, LabeledGraph
from .lattice import BOTTOM, TOP, Label, Signature, base
from .terms import HOLE, App, Term, TrsRule, Var, variables

__all__ = [
    "DEFAULT_SIGNATURE", "NameSupply", "random_term", "random_rule", "random_context",
    "random_substitution", "random_graph", "noisy_encoding", "random_over",
    "random_mono_extension", "random_span", "random_cospan",
]

DEFAULT_SIGNATURE = Signature({"f": 2, "g": 1, "h": 1, "a": 0, "b": 0})


class NameSupply:
    def __init__(self, prefix: str = "v"):
        self.prefix = prefix
        self.n = 0

    def __call__(self) -> str:
        self.n += 1
        return f"{self.prefix}{self.n}"


def _by_arity(sig: Signature):
    consts = [s for s, a in sig.items() if a == 0]
    funcs = [s for s, a in sig.items() if a > 0]
    return consts, funcs


def random_term(rng: random.Random, sig: Signature, max_symbols: int, fresh: NameSupply,
                var_prob: float = 0.3, ground: bool = False) -> Term:
    """A random linear term with at most ``max_symbols`` symbol occurrences."""
    consts, funcs = _by_arity(sig)
    budget = [max_symbols]

    def gen() -> Term:
        leaf_only = budget[0] <= 0
        if not ground and (leaf_only or rng.random() < var_prob or not (consts or funcs)):
            return Var(fresh())
        options = [s for s in funcs if sig[s] <= budget[0] * 2] if not leaf_only else []
        if consts and (not options or rng.random() < 0.35):
            if leaf_only and ground:
                budget[0] -= 1
            else:
                budget[0] -= 1
            return App(rng.choice(consts))
        if not options:
            return Var(fresh())
        sym = rng.choice(options)
        budget[0] -= 1
        return App(sym, tuple(gen() for _ in range(sig[sym])))

    if ground and not consts:
        raise ValueError("ground terms need a constant")
    return gen()


def _nonvar_term(rng, sig, max_symbols, fresh, **kw) -> Term:
    for _ in range(100):
        t = random_term(rng, sig, max_symbols, fresh, **kw)
        if isinstance(t, App):
            return t
    consts, funcs = _by_arity(sig)
    sym = (funcs or consts)[0]
    return App(sym, tuple(Var(fresh()) for _ in range(sig[sym])))


def random_rule(rng: random.Random, sig: Signature, max_symbols: int = 4) -> TrsRule:
    """A random linear rule; the rhs uses a random subset of the lhs variables."""
    fresh = NameSupply("x")
    lhs = _nonvar_term(rng, sig, max_symbols, fresh)
    pool = variables(lhs)
    rng.shuffle(pool)
    consts, funcs = _by_arity(sig)
    budget = [rng.randint(0, max_symbols)]

    def gen() -> Term:
        choices = []
        if pool:
            choices.append("var")
        if consts:
            choices.append("const")
        if funcs and budget[0] > 0:
            choices.append("func")
        kind = rng.choice(choices) if choices else "const"
        if kind == "var":
            return Var(pool.pop())
        if kind == "func":
            sym = rng.choice(funcs)
            budget[0] -= 1
            return App(sym, tuple(gen() for _ in range(sig[sym])))
        if not consts:
            # no constant to fall back on; reuse a function symbol over fresh-free leaves
            return Var(pool.pop()) if pool else App(funcs[0], ())
        budget[0] -= 1
        return App(rng.choice(consts))

    rhs = gen()
    return TrsRule(lhs, rhs)


def random_context(rng: random.Random, sig: Signature, max_symbols: int, fresh: NameSupply) -> Term:
    """A linear term with exactly one :data:`HOLE`."""
    consts, funcs = _by_arity(sig)
    depth = rng.randint(0, max(0, max_symbols))
    ctx: Term = HOLE
    for _ in range(depth):
        if not funcs:
            break
        sym = rng.choice(funcs)
        k = rng.randint(1, sig[sym])
        args = []
        for i in range(1, sig[sym] + 1):
            if i == k:
                args.append(ctx)
            else:
                args.append(random_term(rng, sig, 0, fresh, var_prob=0.5))
        ctx = App(sym, tuple(args))
    return ctx


def random_substitution(rng: random.Random, sig: Signature, names: Sequence[str], max_symbols: int,
                        fresh: NameSupply) -> dict[str, Term]:
    return {x: random_term(rng, sig, rng.randint(0, max_symbols), fresh) for x in names}


def _random_label(rng: random.Random, sig: Signature, top_prob=0.05, bot_prob=0.1, int_prob=0.05) -> Label:
    r = rng.random()
    if r < top_prob:
        return TOP
    if r < top_prob + bot_prob:
        return BOTTOM
    if r < top_prob + bot_prob + int_prob:
        return base(rng.randint(1, 2))
    return base(rng.choice(list(sig)))


def random_graph(rng: random.Random, sig: Signature, max_vertices: int = 6, max_edges: int | None = None,
                 well_formed_bias: float = 0.6) -> LabeledGraph:
    """Random graph labeled from the flat lattice over ``sig``.

    With probability ``well_formed_bias`` per vertex the out-edges follow the
    arity of its symbol (labels ``1..n``), so good nodes are common.
    """
    n = rng.randint(1, max_vertices)
    vs = [f"n{i}" for i in range(n)]
    vl = {v: _random_label(rng, sig) for v in vs}
    ed = {}
    k = 0
    for v in vs:
        lab = vl[v]
        arity = sig.arity_of(lab)
        if arity is not None and rng.random() < well_formed_bias:
            for i in range(1, arity + 1):
                ed[f"e{k}"] = (v, rng.choice(vs), base(i))
                k += 1
    extra = rng.randint(0, max(1, n // 2)) if max_edges is None else rng.randint(0, max_edges)
    for _ in range(extra):
        r = rng.random()
        lab = TOP if r < 0.1 else BOTTOM if r < 0.2 else base(rng.randint(1, 2))
        ed[f"e{k}"] = (rng.choice(vs), rng.choice(vs), lab)
        k += 1
    if max_edges is not None and len(ed) > max_edges:
        keep = sorted(rng.sample(sorted(ed), max_edges))
        ed = {e: ed[e] for e in keep}
    return LabeledGraph(vl, ed)


def noisy_encoding(rng: random.Random, sig: Signature, g: LabeledGraph, extra_vertices: int = 2,
                   extra_edges: int = 3, relabel: int = 1) -> LabeledGraph:
    """``g`` with random extra vertices, edges (often closing cycles) and relabelings."""
    vl = dict(g.vlabel)
    ed = dict(g.edge)
    for i in range(extra_vertices):
        vl[f"z{i}"] = _random_label(rng, sig)
    vs = sorted(vl)
    for i in range(extra_edges):
        r = rng.random()
        lab = TOP if r < 0.1 else BOTTOM if r < 0.2 else base(rng.randint(1, 2))
        ed[f"q{i}"] = (rng.choice(vs), rng.choice(vs), lab)
    for _ in range(relabel):
        v = rng.choice(vs)
        vl[v] = _random_label(rng, sig)
    return LabeledGraph(vl, ed)


def _below(rng: random.Random, lab: Label) -> Label:
    return lab if rng.random() < 0.6 else BOTTOM


def _above(rng: random.Random, lab: Label) -> Label:
    return lab if rng.random() < 0.7 else TOP


def random_over(rng: random.Random, X: LabeledGraph, n_vertices: int, n_edges: int,
                injective: bool = False, prefix: str = "a") -> GraphMorphism:
    """A random graph ``A`` with a morphism ``A -> X``.

    Vertices of ``A`` are sent to random vertices of ``X`` (distinct ones when
    ``injective``); each edge of ``A`` lies over a chosen edge of ``X``.
    Labels are drawn at or below the labels of the images.
    """
    xs = list(X.vertices)
    if not xs:
        return GraphMorphism(LabeledGraph({}), X, {}, {})
    if injective:
        n_vertices = min(n_vertices, len(xs))
        targets = rng.sample(xs, n_vertices)
    else:
        targets = [rng.choice(xs) for _ in range(n_vertices)]
    vs = [f"{prefix}{i}" for i in range(n_vertices)]
    vmap = dict(zip(vs, targets))
    vl = {v: _below(rng, X.vlabel[vmap[v]]) for v in vs}
    fiber: dict[str, list[str]] = {}
    for v, x in vmap.items():
        fiber.setdefault(x, []).append(v)
    ed, emap = {}, {}
    used = set()
    options = [d for d in X.edges if X.src(d) in fiber and X.tgt(d) in fiber]
    for i in range(n_edges):
        if not options:
            break
        d = rng.choice(options)
        if injective and d in used:
            continue
        used.add(d)
        s, t, lab = X.edge[d]
        e = f"{prefix}e{i}"
        ed[e] = (rng.choice(fiber[s]), rng.choice(fiber[t]), _below(rng, lab))
        emap[e] = d
    A = LabeledGraph(vl, ed)
    return GraphMorphism(A, X, vmap, emap)


def random_mono_extension(rng: random.Random, A: LabeledGraph, sig: Signature, extra_vertices: int,
                          extra_edges: int, prefix: str = "c") -> GraphMorphism:
    """A mono ``A -> C`` where ``C`` is a relabeled copy of ``A`` plus extras."""
    vmap = {v: f"{prefix}{v}" for v in A.vertices}
    emap = {e: f"{prefix}{e}" for e in A.edges}
    vl = {vmap[v]: _above(rng, lab) for v, lab in A.vlabel.items()}
    ed = {emap[e]: (vmap[s], vmap[t], _above(rng, lab)) for e, (s, t, lab) in A.edge.items()}
    for i in range(extra_vertices):
        vl[f"{prefix}+{i}"] = _random_label(rng, sig)
    vs = sorted(vl)
    if vs:
        for i in range(extra_edges):
            ed[f"{prefix}+e{i}"] = (rng.choice(vs), rng.choice(vs), base(rng.randint(1, 2)))
    return GraphMorphism(A, LabeledGraph(vl, ed), vmap, emap)


def random_span(rng: random.Random, sig: Signature, max_elements: int = 6):
    """``(b: A -> B, c: A -> C)`` with ``c`` monic and ``B``, ``C`` small."""
    B = random_graph(rng, sig, max_vertices=max(1, max_elements // 2), max_edges=max_elements // 2)
    nA = rng.randint(0, len(B.vlabel))
    b = random_over(rng, B, nA, rng.randint(0, 2), prefix="a")
    c = random_mono_extension(rng, b.dom, sig, rng.randint(0, 2), rng.randint(0, 1))
    return b, c


def random_cospan(rng: random.Random, sig: Signature, max_elements: int = 6, monic_left: bool = False):
    """``(b: B -> X, c: C -> X)`` with small ``B`` and ``C``."""
    X = random_graph(rng, sig, max_vertices=max(1, max_elements // 2), max_edges=max_elements // 2)
    b = random_over(rng, X, rng.randint(1, 3), rng.randint(0, 2), injective=monic_left, prefix="b")
    c = random_over(rng, X, rng.randint(1, 3), rng.randint(0, 2), prefix="c")
    return b, c

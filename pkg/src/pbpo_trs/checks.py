"""Randomized property suites over the encoding, the engine and the zoning.

Each suite returns a :class:`SuiteResult`; failures carry a small textual
reproduction (terms and graph files) so a counterexample can be replayed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .catops import pullback, pushout, verify_pullback_universal, verify_pushout_universal
from .encoding import decode_term, encode_rule, encode_term, positions_in_graph
from .engine import EngineError, find_matches, rewrite_bounded, steps_at_position, successors, apply_step
from .formats import format_graph
from .graph import LabeledGraph, are_isomorphic, is_mono, validate_morphism
from .lattice import BOTTOM, TOP, Signature, base
from .randgen import (DEFAULT_SIGNATURE, NameSupply, noisy_encoding, random_context, random_cospan,
                      random_graph, random_rule, random_span, random_term)
from .terms import (Trs, TrsRule, Var, apply_substitution, format_position, hole_position, plug,
                    positions, rename_canonically, rewrite_at, size, subterm_at)
from .zoning import (ZoneError, bad_nodes, check_match_in_one_zone, classify_nodes, compute_zoning,
                     drop_cycles, is_acyclic, undirected_path, zone_subgraph, zone_to_term)

__all__ = [
    "SuiteResult", "step_preservation", "closedness", "match_determinism", "drop_cycles_suite", "bad_node_suite",
    "categorical_suite", "zoning_suite", "termination_smoke", "confluence_probe", "run_all",
]


@dataclass
class SuiteResult:
    name: str
    samples: int = 0
    failures: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str, limit: int = 20):
        if len(self.failures) < limit:
            self.failures.append(msg)
        else:
            self.stats["suppressed"] = self.stats.get("suppressed", 0) + 1

    def bump(self, key: str, n: int = 1):
        self.stats[key] = self.stats.get(key, 0) + n

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        extra = ", ".join(f"{k}={v}" for k, v in sorted(self.stats.items()))
        return f"{self.name}: {self.samples} samples, {status}" + (f" ({extra})" if extra else "")


def _same_term(a, b) -> bool:
    return rename_canonically(a) == rename_canonically(b)


class _RulePool:
    """Encoded rules, either fixed by a TRS or drawn at random."""

    def __init__(self, trs: Trs | None, sig: Signature, max_symbols: int = 3):
        self.trs = trs
        self.sig = trs.signature if trs is not None else sig
        self.max_symbols = max_symbols
        self._cache: dict = {}

    def draw(self, rng: random.Random) -> tuple[TrsRule, object]:
        if self.trs is not None:
            rule = rng.choice(self.trs.rules)
        else:
            rule = random_rule(rng, self.sig, self.max_symbols)
        if rule not in self._cache:
            self._cache[rule] = encode_rule(self.sig, rule)
        return rule, self._cache[rule]


def _fresh_supplies(sig: Signature):
    # variable names that cannot collide with symbols of the signature
    prefix = "y"
    while any(s.startswith(prefix) for s in sig):
        prefix += "y"
    return NameSupply(prefix), NameSupply(prefix + "z")


def _instance(rng: random.Random, sig: Signature, rule: TrsRule, max_symbols: int):
    """A term ``C[l sigma]`` with at most ``max_symbols`` symbols, plus its hole position."""
    budget = max_symbols - size(rule.lhs)
    if budget < 0:
        return None
    for _ in range(20):
        cvars, svars = _fresh_supplies(sig)
        ctx = random_context(rng, sig, rng.randint(0, budget), cvars)
        left = budget - size(ctx)
        if left < 0:
            continue
        names = sorted(set(_vars(rule.lhs)))
        sigma = {}
        for x in names:
            t = random_term(rng, sig, rng.randint(0, max(0, left)), svars)
            left -= size(t)
            if left < 0:
                t = Var(svars())
                left += size(t)
            sigma[x] = t
        s = plug(ctx, apply_substitution(rule.lhs, sigma))
        if size(s) <= max_symbols:
            return s, hole_position(ctx), sigma
    return None


def _vars(t):
    from .terms import variables
    return variables(t)


def step_preservation(rng: random.Random, samples: int = 200, *, trs: Trs | None = None,
                      sig: Signature = DEFAULT_SIGNATURE, max_symbols: int = 8) -> SuiteResult:
    """Term steps at a position and graph steps at that position agree.

    Every position of ``s`` is probed: where the term rule applies there must be
    exactly one strong match (one adherence) whose result encodes the reduct;
    where it does not apply there must be none.
    """
    res = SuiteResult("step-preservation")
    pool = _RulePool(trs, sig)
    drawn = 0
    while res.samples < samples and drawn < samples * 20:
        drawn += 1
        rule, erule = pool.draw(rng)
        inst = _instance(rng, pool.sig, rule, max_symbols)
        if inst is None:
            continue
        s, hole, _ = inst
        res.samples += 1
        single = Trs(pool.sig, (rule,))
        enc = encode_term(pool.sig, s)
        for q in positions(s):
            if isinstance(subterm_at(s, q), Var):
                continue
            t = rewrite_at(single, s, 0, q)
            try:
                steps = steps_at_position(erule, enc, q)
            except EngineError as exc:
                res.fail(f"engine error at {format_position(q)} in {s} with {rule}: {exc}")
                continue
            if t is None:
                if steps:
                    res.fail(f"graph step without term step: {rule} on {s} at {format_position(q)}")
                continue
            res.bump("steps")
            if len(steps) != 1:
                res.fail(f"expected one adherence, found {len(steps)}: {rule} on {s} at {format_position(q)}")
                continue
            step = steps[0]
            problems = step.check()
            if problems:
                res.fail(f"malformed step ({'; '.join(problems)}): {rule} on {s}")
            expected = encode_term(pool.sig, t).graph
            if are_isomorphic(step.GR, expected) is None:
                res.fail(f"graph result differs from encoding of {t}: {rule} on {s} at {format_position(q)}\n"
                         + format_graph(step.GR, "GR"))
        if not steps_at_position(erule, enc, hole):
            res.fail(f"no graph step at the planted position {format_position(hole)}: {rule} on {s}")
    return res


def closedness(rng: random.Random, samples: int = 100, *, trs: Trs | None = None,
               sig: Signature = DEFAULT_SIGNATURE, depth: int = 5, max_symbols: int = 8,
               max_states: int = 60) -> SuiteResult:
    """Graphs reachable from encoded terms decode, and steps decode to term steps.

    Also checks match determinism: per rule and host vertex of the lhs root
    there is at most one step.
    """
    res = SuiteResult("closedness")
    drawn = 0
    while res.samples < samples and drawn < samples * 20:
        drawn += 1
        if trs is None:
            rules = [random_rule(rng, sig, 3) for _ in range(rng.randint(1, 2))]
            system = Trs(sig, tuple(rules))
        else:
            system = trs
        inst = _instance(rng, system.signature, rng.choice(system.rules), max_symbols)
        if inst is None:
            continue
        res.samples += 1
        erules = [encode_rule(system.signature, r) for r in system.rules]
        start = encode_term(system.signature, inst[0]).graph
        frontier = [(start, 0)]
        seen = [start]
        while frontier:
            G, d = frontier.pop(0)
            u = decode_term(G, system.signature)
            if u is None:
                res.fail(f"reachable graph does not decode, from {inst[0]}:\n{format_graph(G, 'G')}")
                continue
            if d >= depth:
                continue
            root = next(v for v in G.vertices if not G.in_edges[v])
            pos = positions_in_graph(G, root)
            per_site: dict = {}
            for i, step in successors([e.rule for e in erules], G):
                res.bump("transitions")
                site = (i, step.m.vmap[erules[i].l_encoding.root])
                per_site[site] = per_site.get(site, 0) + 1
                p = pos[site[1]]
                v = decode_term(step.GR, system.signature)
                if v is None:
                    res.fail(f"reduct does not decode, from {u}:\n{format_graph(step.GR, 'GR')}")
                    continue
                t = rewrite_at(system, u, i, p)
                if t is None or not _same_term(t, v):
                    res.fail(f"graph step {u} => {v} is not the term step of rule {i} at {format_position(p)}")
                if len(seen) < max_states and all(are_isomorphic(step.GR, h) is None for h in seen):
                    seen.append(step.GR)
                    frontier.append((step.GR, d + 1))
            for site, n in per_site.items():
                if n != 1:
                    res.fail(f"{n} steps for rule {site[0]} at one position of {u}")
    return res


def match_determinism(rng: random.Random, samples: int = 200, *, trs: Trs | None = None,
                      sig: Signature = DEFAULT_SIGNATURE, max_symbols: int = 8, depth: int = 5) -> SuiteResult:
    """At most one strong match per rule and root position.

    Follows a random derivation of up to ``depth`` steps from an encoded
    instance. At every position of every graph on the way, the pairs
    ``(m, alpha)`` rooted there are counted: exactly one where the term rule
    applies (so one adherence, and trivially isomorphic results), none elsewhere.
    """
    res = SuiteResult("match-determinism")
    pool = _RulePool(trs, sig)
    drawn = 0
    while res.samples < samples and drawn < samples * 20:
        drawn += 1
        rule, erule = pool.draw(rng)
        inst = _instance(rng, pool.sig, rule, max_symbols)
        if inst is None:
            continue
        res.samples += 1
        single = Trs(pool.sig, (rule,))
        G = encode_term(pool.sig, inst[0]).graph
        for _ in range(depth + 1):
            u = decode_term(G, pool.sig)
            if u is None:
                res.fail(f"graph on a derivation of {inst[0]} does not decode:\n{format_graph(G, 'G')}")
                break
            root = next(v for v in G.vertices if not G.in_edges[v])
            applicable = []
            for v, q in sorted(positions_in_graph(G, root).items(), key=lambda vq: vq[1]):
                matches = find_matches(erule.rule, G, fixed_v={erule.l_encoding.root: v})
                if rewrite_at(single, u, 0, q) is None:
                    if matches:
                        res.fail(f"match without a redex: {rule} on {u} at {format_position(q)}")
                    continue
                res.bump("positions")
                if len(matches) != 1:
                    res.fail(f"{len(matches)} strong matches: {rule} on {u} at {format_position(q)}")
                    continue
                applicable.append(matches[0])
            if not applicable:
                break
            m, alpha = rng.choice(applicable)
            G = apply_step(erule.rule, G, m, alpha).GR
    return res


def _graph_with_match(rng, pool: _RulePool, max_vertices: int):
    """A small encoded instance of a rule's lhs, disturbed by random noise."""
    rule, erule = pool.draw(rng)
    inst = _instance(rng, pool.sig, rule, max_symbols=4)
    if inst is None:
        return erule, random_graph(rng, pool.sig, max_vertices)
    g = encode_term(pool.sig, inst[0]).graph
    room = max(0, max_vertices - len(g.vertices))
    if room < 0 or len(g.vertices) > max_vertices:
        return erule, random_graph(rng, pool.sig, max_vertices)
    noisy = noisy_encoding(rng, pool.sig, g, extra_vertices=rng.randint(0, min(2, room)),
                           extra_edges=rng.randint(0, 3), relabel=rng.randint(0, 1))
    return erule, noisy


def _host(rng, pool, max_vertices):
    if rng.random() < 0.7:
        return _graph_with_match(rng, pool, max_vertices)
    rule, erule = pool.draw(rng)
    return erule, random_graph(rng, pool.sig, max_vertices)


def drop_cycles_suite(rng: random.Random, samples: int = 200, *, trs: Trs | None = None,
                      sig: Signature = DEFAULT_SIGNATURE, max_vertices: int = 8) -> SuiteResult:
    """Every step ``G -> H`` yields a step ``drop(G) -> drop(H)`` up to isomorphism."""
    res = SuiteResult("drop-cycles")
    pool = _RulePool(trs, sig)
    for _ in range(samples):
        erule, G = _host(rng, pool, max_vertices)
        res.samples += 1
        steps = [apply_step(erule.rule, G, m, a) for m, a in find_matches(erule.rule, G)]
        if not steps:
            continue
        dG = drop_cycles(G)
        dsteps = [apply_step(erule.rule, dG, m, a) for m, a in find_matches(erule.rule, dG)]
        for step in steps:
            res.bump("steps")
            if undirected_cycle_edges_present(G):
                res.bump("steps-on-cyclic-hosts")
            if not check_match_in_one_zone(erule, G, step.m):
                res.fail(f"match leaves its zone: {erule.source_rule}\n{format_graph(G, 'G')}")
            target = drop_cycles(step.GR)
            if not any(are_isomorphic(ds.GR, target) is not None for ds in dsteps):
                res.fail(f"no matching step after dropping cycles: {erule.source_rule}\n"
                         + format_graph(G, "G"))
    return res


def undirected_cycle_edges_present(G: LabeledGraph) -> bool:
    from .zoning import undirected_cycle_edges
    return bool(undirected_cycle_edges(G))


_LABEL_CHOICES = (BOTTOM, TOP, base(1), base(2))


def bad_node_suite(rng: random.Random, samples: int = 100, *, trs: Trs | None = None,
                   sig: Signature = DEFAULT_SIGNATURE, max_vertices: int = 8) -> SuiteResult:
    """Relabeling a bad node changes nothing in the steps but that label.

    Steps are paired by their match and adherence (which live on the same
    element names in both graphs); each result must equal the original result
    with the same vertex relabeled, when it survives. Every step of the
    original graph must survive any relabeling; when the node stays bad under
    the new label the correspondence must also be onto, since the statement
    then applies in both directions.
    """
    res = SuiteResult("bad-node-relabeling")
    pool = _RulePool(trs, sig)
    labels = _LABEL_CHOICES + tuple(base(s) for s in pool.sig)
    attempts = 0
    while res.samples < samples and attempts < samples * 20:
        attempts += 1
        erule, G = _host(rng, pool, max_vertices)
        bad = sorted(bad_nodes(pool.sig, G))
        if not bad:
            continue
        res.samples += 1
        v = rng.choice(bad)
        label = rng.choice(labels)
        G2 = G.with_vertex_labels({v: label})
        still_bad = v in bad_nodes(pool.sig, G2)
        res.bump("bijective" if still_bad else "one-way")
        before = {(m.key(), a.key()): apply_step(erule.rule, G, m, a) for m, a in find_matches(erule.rule, G)}
        after = {(m.key(), a.key()): apply_step(erule.rule, G2, m, a) for m, a in find_matches(erule.rule, G2)}
        res.bump("steps", len(before))
        lost = set(before) - set(after)
        gained = set(after) - set(before)
        if gained and not still_bad:
            res.bump("gained after turning good", len(gained))
        if lost or (still_bad and gained):
            res.fail(f"relabeling bad node {v} to {label} changed the matches: {erule.source_rule}\n"
                     + format_graph(G, "G"))
            continue
        for key, step in before.items():
            H = step.GR
            image = _image_of(step, v)
            expected = H.with_vertex_labels({image: label}) if image is not None else H
            if after[key].GR != expected:
                res.fail(f"result differs beyond the relabeling of {v}: {erule.source_rule}\n"
                         + format_graph(G, "G"))
    return res


def _image_of(step, v: str) -> str | None:
    # follow a host vertex along gR . gL^-1 (gL is injective for encoded rules)
    pre = [x for x, y in step.gL.vmap.items() if y == v]
    return step.gR.vmap[pre[0]] if pre else None


def categorical_suite(rng: random.Random, samples: int = 100, *, sig: Signature = DEFAULT_SIGNATURE,
                      max_elements: int = 6) -> SuiteResult:
    """Pushouts and pullbacks of random (co)spans satisfy their universal properties."""
    res = SuiteResult("categorical")
    for _ in range(samples):
        res.samples += 1
        b, c = random_span(rng, sig, max_elements)
        po = pushout(b, c)
        for name, f in (("left", po.left), ("right", po.right)):
            if not validate_morphism(f)[0]:
                res.fail(f"pushout {name} leg is not a morphism")
        if not verify_pushout_universal((b, c), po):
            res.fail(f"pushout fails its universal property:\n{format_graph(b.cod, 'B')}{format_graph(c.cod, 'C')}")
        if not is_mono(po.left):
            res.fail("pushout does not preserve the monic leg")
        f, g = random_cospan(rng, sig, max_elements, monic_left=True)
        pb = pullback(f, g)
        if not verify_pullback_universal((f, g), pb):
            res.fail(f"pullback fails its universal property:\n{format_graph(f.dom, 'B')}{format_graph(g.dom, 'C')}")
        if not is_mono(pb.right):
            res.fail("pullback does not preserve the monic leg")
    return res


def zoning_suite(rng: random.Random, samples: int = 200, *, sig: Signature = DEFAULT_SIGNATURE,
                 max_vertices: int = 8) -> SuiteResult:
    """Order independence, bridge endpoints, connectedness and zone decoding."""
    res = SuiteResult("zoning")
    for _ in range(samples):
        res.samples += 1
        G = random_graph(rng, sig, max_vertices, well_formed_bias=0.8)
        z1 = compute_zoning(sig, G)
        order = list(G.edges)
        rng.shuffle(order)
        z2 = compute_zoning(sig, G, order)
        z3 = compute_zoning(sig, G, sorted(G.edges, reverse=True))
        if not (z1.partition() == z2.partition() == z3.partition() and z1.bridges == z2.bridges):
            res.fail("zoning depends on the edge order:\n" + format_graph(G, "G"))
        cls = classify_nodes(sig, G)
        for e in z1.bridges:
            s, t, _ = G.edge[e]
            zs, zt = z1.zone_of_vertex[s], z1.zone_of_vertex[t]
            if cls[s].good or any(G.src(d) == s for d in z1.zone_edges[zs]):
                res.fail(f"bridge {e} does not leave a bad leaf:\n" + format_graph(G, "G"))
            if any(G.tgt(d) == t for d in z1.zone_edges[zt]):
                res.fail(f"bridge {e} does not enter a zone root:\n" + format_graph(G, "G"))
        for z in z1.zones():
            Z = zone_subgraph(G, z1, z)
            vs = sorted(Z.vertices)
            if any(undirected_path(Z, vs[0], w) is None for w in vs[1:]):
                res.fail(f"zone {z} is not connected:\n" + format_graph(G, "G"))
            if not is_acyclic(Z):
                res.bump("cyclic-zones")
                continue
            res.bump("acyclic-zones")
            try:
                t = zone_to_term(sig, G, z1, z)
            except (ZoneError, ValueError) as exc:
                t, why = None, f" ({exc})"
            else:
                why = ""
            if t is None:
                res.fail(f"acyclic zone {z} does not decode{why}:\n" + format_graph(G, "G"))
                continue
            relabeled = Z.with_vertex_labels({v: BOTTOM for v in bad_nodes(sig, G) & set(Z.vlabel)})
            if are_isomorphic(encode_term(sig, t).graph, relabeled) is None:
                res.fail(f"zone {z} is not the encoding of {t}:\n" + format_graph(G, "G"))
    return res


def termination_smoke(trs: Trs, graphs: Sequence[LabeledGraph], bound: int = 50) -> SuiteResult:
    """Breadth-first exploration from each graph stays below ``bound`` steps."""
    res = SuiteResult("termination-smoke")
    rules = [e.rule for e in (encode_rule(trs.signature, r) for r in trs.rules)]
    for G in graphs:
        res.samples += 1
        trace = rewrite_bounded(rules, G, max_steps=bound, strategy="bfs")
        if trace.bound_hit or trace.cyclic or trace.longest is None or trace.longest >= bound:
            res.fail("exploration reached the bound:\n" + format_graph(G, "G"))
        else:
            res.stats["longest"] = max(res.stats.get("longest", 0), trace.longest)
    return res


def confluence_probe(trs: Trs, G: LabeledGraph, max_steps: int = 100) -> list[LabeledGraph]:
    """Normal forms reachable from ``G``, up to isomorphism."""
    rules = [encode_rule(trs.signature, r).rule for r in trs.rules]
    return rewrite_bounded(rules, G, max_steps=max_steps, strategy="bfs").normal_forms


SUITES: dict[str, Callable] = {
    "step-preservation": step_preservation,
    "closedness": closedness,
    "match-determinism": match_determinism,
    "drop-cycles": drop_cycles_suite,
    "bad-node-relabeling": bad_node_suite,
}


def run_all(trs: Trs | None, seed: int, samples: int = 200, max_size: int = 8) -> list[SuiteResult]:
    """The term-level suites for ``trs`` (random rules when ``None``), all from one seed."""
    out = []
    for i, (name, suite) in enumerate(SUITES.items()):
        rng = random.Random(f"{seed}:{name}")
        kwargs = {"trs": trs}
        if name in ("drop-cycles", "bad-node-relabeling"):
            kwargs["max_vertices"] = max_size
        if trs is not None:
            kwargs["sig"] = trs.signature
        out.append(suite(rng, samples, **kwargs))
    return out

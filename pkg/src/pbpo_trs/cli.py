"""Command-line entry point: ``pbpo-trs <command> ...``.

Exit codes: 0 success, 1 counterexample or property failure, 2 input error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .catops import SpanResult, verify_pullback_universal
from .encoding import EncodingError, decode_term, encode_rule, encode_term
from .engine import EngineError, PbpoRule, rewrite_bounded, successors
from .formats import FormatError, format_graph, format_rule, parse_graph, parse_rule, to_dot, zoning_to_dot
from .graph import LabeledGraph, MorphismError, RootedGraph
from .lattice import Signature
from .terms import ParseError, TermError, Trs, parse_term, parse_trs
from .zoning import ZoneError, compute_zoning, drop_cycles, is_acyclic, zone_subgraph, zone_to_term

DEFAULT_SEED = 20240601

INPUT_ERRORS = (OSError, ParseError, TermError, FormatError, EncodingError, MorphismError, ValueError)


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load_trs(path: str) -> Trs:
    return parse_trs(_read(path))


def _load_graph(path: str) -> LabeledGraph:
    g = parse_graph(_read(path))
    return g.graph if isinstance(g, RootedGraph) else g


def _signature(args) -> Signature:
    if getattr(args, "trs", None):
        return _load_trs(args.trs).signature
    if getattr(args, "sig", None):
        arities = {}
        for decl in args.sig.replace(",", " ").split():
            name, _, ar = decl.partition("/")
            if not ar.isdigit():
                raise InputError(f"bad signature entry {decl!r}")
            arities[name] = int(ar)
        return Signature(arities)
    raise InputError("a signature is needed: pass --trs FILE or --sig 'f/2 a/0'")


def _rules(args) -> list[PbpoRule]:
    rules = []
    if getattr(args, "trs", None):
        trs = _load_trs(args.trs)
        rules += [encode_rule(trs.signature, r).rule for r in trs.rules]
    for path in getattr(args, "rule", None) or []:
        rule = parse_rule(_read(path))
        problems = rule.validate()
        if problems:
            raise InputError(f"{path}: not a PBPO+ rule: {'; '.join(problems)}")
        rules.append(rule)
    if not rules:
        raise InputError("no rules given: pass --trs FILE and/or --rule FILE")
    return rules


def _host(args) -> LabeledGraph:
    if getattr(args, "term", None):
        if not getattr(args, "trs", None) and not getattr(args, "sig", None):
            raise InputError("--term needs --trs or --sig for its signature")
        sig = _signature(args)
        return encode_term(sig, parse_term(args.term, sig)).graph
    if not args.graph:
        raise InputError("no host graph: pass a graph file or --term")
    return _load_graph(args.graph)


def _dot(args, name: str, text: str):
    if getattr(args, "dot_dir", None):
        d = Path(args.dot_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{name}.dot").write_text(text)


# -- commands ---------------------------------------------------------------

def cmd_encode(args) -> int:
    trs = _load_trs(args.trs_file)
    indices = range(len(trs.rules)) if args.index is None else [args.index]
    for i in indices:
        if not 0 <= i < len(trs.rules):
            raise InputError(f"rule index {i} out of range (the system has {len(trs.rules)} rules)")
        er = encode_rule(trs.signature, trs.rules[i])
        rp = er.r_prime()
        print(f"# rule {i}: {trs.rules[i]}")
        print(format_rule(er.rule), end="")
        print(format_graph(rp.apex, "Rp"))
        for name, g in (("L", er.rule.L), ("K", er.rule.K), ("R", er.rule.R), ("Lp", er.rule.Lp),
                        ("Kp", er.rule.Kp), ("Rp", rp.apex)):
            _dot(args, f"rule{i}_{name}", to_dot(g, name))
    return 0


def cmd_decode(args) -> int:
    g = parse_graph(_read(args.graph))
    sig = _signature(args) if (args.trs or args.sig) else None
    root = g.root if isinstance(g, RootedGraph) else None
    graph = g.graph if isinstance(g, RootedGraph) else g
    t = decode_term(graph, sig, root=root)
    if t is None:
        raise InputError("the graph is not a term encoding")
    print(t)
    return 0


def cmd_step(args) -> int:
    rules = _rules(args)
    G = _host(args)
    succ = successors(rules, G)
    print(f"# {len(succ)} step(s)")
    for k, (i, step) in enumerate(succ):
        name = f"step{k}"
        print(f"# rule {rules[i].name or i}, match {dict(sorted(step.m.vmap.items()))}")
        print(format_graph(step.GR, name))
        _dot(args, name, to_dot(step.GR, name, highlight=set(step.gR.vmap.values())))
        if args.verify:
            problems = step.check(universal=True)
            if problems:
                print(f"# step {k} fails: {'; '.join(problems)}")
                return 1
    return 0


def cmd_run(args) -> int:
    rules = _rules(args)
    G = _host(args)
    trace = rewrite_bounded(rules, G, max_steps=args.max_steps, strategy=args.strategy)
    if trace.strategy == "first":
        print(f"# steps: {len(trace.steps)}")
        print(f"# bound hit: {'yes' if trace.bound_hit else 'no'}")
        print(format_graph(trace.graphs[-1], "final"))
        for k, g in enumerate(trace.graphs):
            _dot(args, f"g{k:03d}", to_dot(g, f"g{k}"))
    else:
        print(f"# states: {len(trace.graphs)}")
        print(f"# transitions: {len(trace.transitions)}")
        print(f"# longest derivation: {'unbounded (cycle)' if trace.longest is None else trace.longest}")
        print(f"# bound hit: {'yes' if trace.bound_hit else 'no'}")
        print(f"# normal forms: {len(trace.normal_forms)}")
        for k, g in enumerate(trace.normal_forms):
            print(format_graph(g, f"nf{k}"))
            _dot(args, f"nf{k}", to_dot(g, f"nf{k}"))
    if args.decode:
        finals = trace.normal_forms or trace.graphs[-1:]
        for g in finals:
            t = decode_term(g)
            print("# not a term encoding" if t is None else f"# term: {t}")
    return 0


def cmd_zones(args) -> int:
    sig = _signature(args)
    G = _host(args)
    z = compute_zoning(sig, G)
    print(f"# {len(z.zones())} zone(s), {len(z.bridges)} bridge(s)")
    for zid in z.zones():
        vs = " ".join(sorted(z.zone_vertices(zid)))
        es = " ".join(sorted(z.zone_edges[zid])) or "-"
        root = z.roots.get(zid) or "-"
        Z = zone_subgraph(G, z, zid)
        term = zone_to_term(sig, G, z, zid) if is_acyclic(Z) else "(cyclic)"
        print(f"zone {zid}: vertices {vs}; edges {es}; root {root}; term {term}")
    print("bridges: " + (" ".join(sorted(z.bridges)) or "-"))
    if args.dot:
        Path(args.dot).write_text(zoning_to_dot(G, z))
    return 0


def cmd_dropcycles(args) -> int:
    G = _load_graph(args.graph)
    D = drop_cycles(G)
    print(format_graph(D, "dropped"))
    _dot(args, "dropped", to_dot(D, "dropped"))
    return 0


def _check_rule_file(path: str) -> list[str]:
    rule = parse_rule(_read(path))
    problems = rule.validate()
    if not problems and not verify_pullback_universal((rule.tL, rule.lp),
                                                      SpanResult(rule.K, rule.l, rule.tK)):
        problems.append("the square tL . l = l' . tK is not a pullback")
    return problems


def cmd_check(args) -> int:
    from .checks import confluence_probe, run_all
    if args.confluence and not args.trs_file:
        raise InputError("--confluence needs a TRS file")
    failed = False
    for path in args.rule or []:
        problems = _check_rule_file(path)
        if problems:
            failed = True
            print(f"rule {path}: FAIL")
            for p in problems:
                print(f"  {p}")
        else:
            print(f"rule {path}: ok")
    trs = _load_trs(args.trs_file) if args.trs_file else None
    if trs is not None and not trs.rules:
        print("no rules; nothing to check")
        return 1 if failed else 0
    if args.trs_file or not args.rule:
        for res in run_all(trs, args.seed, samples=args.samples, max_size=args.max_size):
            print(res.summary())
            for f in res.failures:
                failed = True
                print("  counterexample: " + f.replace("\n", "\n    "))
    if args.confluence:
        G = _load_graph(args.confluence)
        nfs = confluence_probe(trs, G, max_steps=args.max_steps)
        print(f"confluence probe: {len(nfs)} normal form(s) up to isomorphism")
        for k, g in enumerate(nfs):
            t = decode_term(g, trs.signature)
            shown = "not a term encoding" if t is None else str(t)
            print(f"  nf{k}: {shown}")
            print("    " + format_graph(g, f"nf{k}").replace("\n", "\n    ").rstrip())
    return 1 if failed else 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pbpo-trs",
                                description="PBPO+ rewriting of linear term rewriting systems on graphs")
    sub = p.add_subparsers(dest="command", required=True)

    def rules_opts(sp):
        sp.add_argument("--trs", help="TRS file whose rules are encoded (also supplies the signature)")
        sp.add_argument("--rule", action="append", help="PBPO+ rule file (repeatable)")

    def host_opts(sp):
        sp.add_argument("graph", nargs="?", help="host graph file ('-' for stdin)")
        sp.add_argument("--term", help="use the encoding of this term as host graph")
        sp.add_argument("--sig", help="signature such as 'f/2 g/1 a/0'")

    sp = sub.add_parser("encode", help="encode the rules of a TRS as PBPO+ rules")
    sp.add_argument("trs_file")
    sp.add_argument("--index", type=int, help="only this rule (0-based)")
    sp.add_argument("--dot-dir", help="write DOT files for L, K, R, Lp, Kp and Rp")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="decode a term encoding back to a term")
    sp.add_argument("graph")
    sp.add_argument("--trs")
    sp.add_argument("--sig")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("step", help="list all one-step rewrites of a graph")
    rules_opts(sp)
    host_opts(sp)
    sp.add_argument("--verify", action="store_true", help="check every square against its universal property")
    sp.add_argument("--dot-dir")
    sp.set_defaults(func=cmd_step)

    sp = sub.add_parser("run", help="rewrite a graph until a normal form or the step bound")
    rules_opts(sp)
    host_opts(sp)
    sp.add_argument("--max-steps", type=int, default=1000)
    sp.add_argument("--strategy", choices=["first", "bfs"], default="first")
    sp.add_argument("--decode", action="store_true", help="also print final graphs as terms")
    sp.add_argument("--dot-dir")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("zones", help="print the zoning of a graph")
    host_opts(sp)
    sp.add_argument("--trs", help="TRS file supplying the signature")
    sp.add_argument("--dot", help="write the zoning as DOT to this file")
    sp.set_defaults(func=cmd_zones)

    sp = sub.add_parser("dropcycles", help="delete all undirected cycle edges")
    sp.add_argument("graph")
    sp.add_argument("--dot-dir")
    sp.set_defaults(func=cmd_dropcycles)

    sp = sub.add_parser("check", help="run the randomized property suites")
    sp.add_argument("trs_file", nargs="?", help="TRS to test (random rules when omitted)")
    sp.add_argument("--rule", action="append", help="PBPO+ rule file to validate (repeatable)")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--max-size", type=int, default=8, help="vertex bound for random graphs")
    sp.add_argument("--max-steps", type=int, default=1000)
    sp.add_argument("--confluence", metavar="GRAPH", help="list the normal forms reachable from GRAPH")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("max_steps", "samples", "max_size"):
        if getattr(args, flag, 0) is not None and getattr(args, flag, 0) < 0:
            print(f"error: --{flag.replace('_', '-')} must be non-negative", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (InputError, ZoneError, *INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

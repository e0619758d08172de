"""Text formats for graphs and PBPO+ rules, and Graphviz DOT export."""
from __future__ import annotations

from typing import Iterable, Mapping

from .graph import GraphMorphism, LabeledGraph, RootedGraph
from .lattice import format_label, parse_label

__all__ = [
    "FormatError", "format_graph", "parse_graph", "parse_graphs", "format_rule", "parse_rule",
    "format_morphism", "to_dot", "zoning_to_dot",
]


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _check_token(x: str, what: str):
    if not x or any(c.isspace() for c in x):
        raise FormatError(f"{what} {x!r} cannot be written as a single token")


def format_graph(g: LabeledGraph | RootedGraph, name: str = "G") -> str:
    root = None
    if isinstance(g, RootedGraph):
        g, root = g.graph, g.root
    lines = [f"graph {name}"]
    for v in g.vertices:
        _check_token(v, "vertex id")
        lines.append(f"v {v} {format_label(g.vlabel[v])}")
    for e in g.edges:
        _check_token(e, "edge id")
        s, t, lab = g.edge[e]
        lines.append(f"e {e} {s} {t} {format_label(lab)}")
    if root is not None:
        lines.append(f"root {root}")
    return "\n".join(lines) + "\n"


def format_morphism(f: GraphMorphism, name: str, dom: str, cod: str) -> str:
    lines = [f"morphism {name} {dom} {cod}"]
    lines += [f"v {a} {b}" for a, b in sorted(f.vmap.items())]
    lines += [f"e {a} {b}" for a, b in sorted(f.emap.items())]
    return "\n".join(lines) + "\n"


def _blocks(text: str):
    """Split into ``(header_tokens, [(lineno, tokens), ...])`` blocks."""
    blocks = []
    for n, raw in enumerate(text.splitlines(), 1):
        # only whole-line comments: identifiers may contain '#'
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if toks[0] in ("graph", "morphism"):
            blocks.append((n, toks, []))
        else:
            if not blocks:
                raise FormatError("content before any 'graph' or 'morphism' header", n)
            blocks[-1][2].append((n, toks))
    return blocks


def _graph_from_block(n, header, body) -> tuple[str, LabeledGraph, str | None]:
    if len(header) != 2:
        raise FormatError("expected 'graph <name>'", n)
    vl, ed, root, where = {}, {}, None, {}
    for ln, toks in body:
        kind = toks[0]
        try:
            if kind == "v" and len(toks) == 3:
                if toks[1] in vl:
                    raise FormatError(f"duplicate vertex {toks[1]}", ln)
                vl[toks[1]] = parse_label(toks[2])
            elif kind == "e" and len(toks) == 5:
                if toks[1] in ed:
                    raise FormatError(f"duplicate edge {toks[1]}", ln)
                ed[toks[1]] = (toks[2], toks[3], parse_label(toks[4]))
                where[toks[1]] = ln
            elif kind == "root" and len(toks) == 2:
                root = toks[1]
                where[None] = ln
            else:
                raise FormatError(f"cannot parse {' '.join(toks)!r}", ln)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(str(exc), ln) from None
    for e, (s, t, _) in ed.items():
        if s not in vl or t not in vl:
            raise FormatError(f"edge {e} has an undeclared endpoint", where[e])
    if root is not None and root not in vl:
        raise FormatError(f"root {root} is not a vertex", where[None])
    return header[1], LabeledGraph(vl, ed), root


def parse_graphs(text: str) -> list[tuple[str, LabeledGraph | RootedGraph]]:
    out = []
    for n, header, body in _blocks(text):
        if header[0] != "graph":
            raise FormatError("unexpected morphism block in a graph file", n)
        name, g, root = _graph_from_block(n, header, body)
        out.append((name, RootedGraph(g, root) if root is not None else g))
    return out


def parse_graph(text: str) -> LabeledGraph | RootedGraph:
    graphs = parse_graphs(text)
    if len(graphs) != 1:
        raise FormatError(f"expected one graph, found {len(graphs)}")
    return graphs[0][1]


_RULE_ENDS = {"l": ("K", "L"), "r": ("K", "R"), "lp": ("Kp", "Lp"), "tL": ("L", "Lp"), "tK": ("K", "Kp")}


def format_rule(rule) -> str:
    parts = [format_graph(getattr(rule, n), n) for n in ("L", "K", "R", "Lp", "Kp")]
    for name, (dom, cod) in _RULE_ENDS.items():
        parts.append(format_morphism(getattr(rule, name), name, dom, cod))
    return "\n".join(parts)


def parse_rule(text: str):
    """Parse five graph blocks (L, K, R, Lp, Kp) and the five morphism blocks."""
    from .engine import PbpoRule
    graphs: dict[str, LabeledGraph] = {}
    maps: dict[str, tuple[int, tuple, dict, dict]] = {}
    for n, header, body in _blocks(text):
        if header[0] == "graph":
            name, g, _ = _graph_from_block(n, header, body)
            if name in graphs:
                raise FormatError(f"graph {name} defined twice", n)
            graphs[name] = g
        else:
            if len(header) != 4:
                raise FormatError("expected 'morphism <name> <dom> <cod>'", n)
            vm, em = {}, {}
            for ln, toks in body:
                if len(toks) != 3 or toks[0] not in ("v", "e"):
                    raise FormatError(f"cannot parse {' '.join(toks)!r}", ln)
                (vm if toks[0] == "v" else em)[toks[1]] = toks[2]
            maps[header[1]] = (n, (header[2], header[3]), vm, em)
    missing = [g for g in ("L", "K", "R", "Lp", "Kp") if g not in graphs]
    if missing:
        raise FormatError(f"missing graph blocks: {', '.join(missing)}")
    morphisms = {}
    for name, (dom, cod) in _RULE_ENDS.items():
        if name not in maps:
            raise FormatError(f"missing morphism {name}")
        n, ends, vm, em = maps[name]
        if ends != (dom, cod):
            raise FormatError(f"morphism {name} must go from {dom} to {cod}", n)
        morphisms[name] = GraphMorphism(graphs[dom], graphs[cod], vm, em)
    return PbpoRule(graphs["L"], graphs["K"], graphs["R"], graphs["Lp"], graphs["Kp"], **morphisms)


def _dot_id(x: str) -> str:
    return '"' + x.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _attrs(caption: str, faded: bool) -> str:
    color = ', color="#00000040", fontcolor="#00000060"' if faded else ""
    return f'[label={_dot_id(caption)}{color}]'


def to_dot(g: LabeledGraph | RootedGraph, name: str = "G", clusters: Mapping[str, Iterable[str]] | None = None,
           highlight: Iterable[str] = ()) -> str:
    """DOT text: vertices captioned ``id^label``, edges by label; ``TOP`` faded."""
    root = None
    if isinstance(g, RootedGraph):
        g, root = g.graph, g.root
    highlight = set(highlight)
    lines = [f"digraph {_dot_id(name)} {{"]

    def vline(v):
        lab = g.vlabel[v]
        attr = _attrs(f"{v}^{format_label(lab)}", lab.is_top)
        if v == root:
            attr = attr[:-1] + ", shape=circle, style=dotted]"
        if v in highlight:
            attr = attr[:-1] + ', style=filled, fillcolor="#c8f0c8"]'
        return f"  {_dot_id(v)} {attr};"

    placed = set()
    if clusters:
        for i, (cname, members) in enumerate(sorted(clusters.items())):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f"    label={_dot_id(cname)}; color=gray;")
            for v in sorted(members):
                lines.append("  " + vline(v))
                placed.add(v)
            lines.append("  }")
    for v in g.vertices:
        if v not in placed:
            lines.append(vline(v))
    for e in g.edges:
        s, t, lab = g.edge[e]
        attr = _attrs(format_label(lab), lab.is_top)
        lines.append(f"  {_dot_id(s)} -> {_dot_id(t)} {attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def zoning_to_dot(g: LabeledGraph, zoning, name: str = "G") -> str:
    clusters = {z: zoning.zone_vertices(z) for z in zoning.zones()}
    text = to_dot(g, name, clusters=clusters)
    # bridges dotted
    for e in sorted(zoning.bridges):
        s, t, lab = g.edge[e]
        old = f"  {_dot_id(s)} -> {_dot_id(t)} {_attrs(format_label(lab), lab.is_top)};"
        new = old[:-2] + ", style=dotted];"
        text = text.replace(old, new, 1)
    return text

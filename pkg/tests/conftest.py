import os

from hypothesis import settings

from pbpo_trs.graph import LabeledGraph
from pbpo_trs.lattice import BOTTOM, TOP, base

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def lab(x):
    """``"_"`` for bottom, ``"T"`` for top, otherwise a base label."""
    if x == "_":
        return BOTTOM
    if x == "T":
        return TOP
    return base(x)


def mk(vertices, edges=()):
    """Graph from ``{id: label}`` and ``(src, tgt, label[, id])`` tuples; edge ids default to ``src>tgt``."""
    vl = {v: lab(x) for v, x in vertices.items()}
    ed = {}
    for e in edges:
        s, t, x = e[:3]
        eid = e[3] if len(e) > 3 else f"{s}>{t}"
        assert eid not in ed
        ed[eid] = (s, t, lab(x))
    return LabeledGraph(vl, ed)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", None) == "call":
                lines.extend(v for k, v in rep.user_properties if k == "acceptance")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

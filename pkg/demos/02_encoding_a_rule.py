"""Encoding a linear term rewrite rule as a PBPO+ rule.

``L`` and ``R`` are the term encodings of both sides, ``K`` keeps the root
and the variables used on the right. ``L'`` adds a context node above the
root and an arbitrary graph below every variable, both labeled top, which is
what lets the rule fire inside any context and for any substitution.
"""
import sys

from pbpo_trs.encoding import encode_rule
from pbpo_trs.fixtures import rule_encoding_trs
from pbpo_trs.formats import format_graph, format_morphism, to_dot


def main(dot_dir=None):
    trs = rule_encoding_trs()
    rule = trs.rules[0]
    print(f"rule: {rule}\n")
    er = encode_rule(trs.signature, rule)
    r = er.rule
    graphs = {"L": r.L, "K": r.K, "R": r.R, "Lp": r.Lp, "Kp": r.Kp, "Rp": er.r_prime().apex}
    for name, g in graphs.items():
        print(format_graph(g, name))
    ends = {"l": ("K", "L"), "r": ("K", "R"), "lp": ("Kp", "Lp"), "tL": ("L", "Lp"), "tK": ("K", "Kp")}
    for name, f in r.morphisms().items():
        print(format_morphism(f, name, *ends[name]))
    print("rule problems:", r.validate() or "none")
    print("linear (lp monic):", r.is_linear)
    if dot_dir:
        from pathlib import Path
        out = Path(dot_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, g in graphs.items():
            (out / f"{name}.dot").write_text(to_dot(g, name))
        print(f"DOT files written to {out}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)

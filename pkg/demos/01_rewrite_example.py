"""A single PBPO+ step, square by square.

The rule relabels a loopless node to ``c`` and cuts every edge between it
and the rest of the graph. ``L'`` says what the surroundings of the match may
look like (anything, as long as the matched node has no loop); ``K'`` keeps
only the surroundings, so the edges incident to the match are dropped.
"""
from pbpo_trs.engine import apply_step, find_matches
from pbpo_trs.fixtures import relabel_host, relabel_rule
from pbpo_trs.formats import format_graph


def main():
    rule, G = relabel_rule(), relabel_host()
    print(format_graph(G, "G_L"))

    matches = find_matches(rule, G)
    print(f"strong matches: {[m.vmap['x'] for m, _ in matches]}")
    print("(z1 has no loop either; z2 does, so the adherence cannot exist there)\n")

    m, alpha = next((m, a) for m, a in matches if m.vmap["x"] == "x")
    print("adherence alpha:", dict(alpha.vmap), "\n")
    step = apply_step(rule, G, m, alpha)
    print(format_graph(step.GK, "G_K"))
    print("# the extraction pullback: x keeps only the bottom label, its edges are gone\n")
    print(format_graph(step.GR, "G_R"))
    print("# the gluing pushout writes the label c back onto x")
    print("diagram problems:", step.check(universal=True) or "none")


if __name__ == "__main__":
    main()

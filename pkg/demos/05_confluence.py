"""Local confluence is not preserved by the encoding.

``g(x) -> a`` and ``h(x) -> b`` have no critical pairs on terms, but in a
graph two parents can share a child. Rewriting the g-side deletes the shared
node together with the h-side, and vice versa, leaving different normal forms.
"""
from pbpo_trs.checks import confluence_probe
from pbpo_trs.fixtures import confluence_graph, confluence_trs, disconnected_graph, disconnected_trs
from pbpo_trs.formats import format_graph


def main():
    print(format_graph(confluence_graph(), "shared"))
    for g in confluence_probe(confluence_trs(), confluence_graph()):
        print(format_graph(g, "normal_form"))

    print("# with only g(x) -> a, a separate component can be typed two ways:")
    print("# by the context node (kept) or below the variable (deleted)\n")
    print(format_graph(disconnected_graph(), "disconnected"))
    for g in confluence_probe(disconnected_trs(), disconnected_graph()):
        print(format_graph(g, "normal_form"))


if __name__ == "__main__":
    main()

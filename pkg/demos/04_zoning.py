"""Zones: the term-like pieces of an arbitrary graph.

A node is good when its outgoing edges fit its arity and every child has a
single parent. Zones grow along edges leaving good nodes; the remaining
edges are bridges. Matches of encoded rules never cross a bridge, and an
acyclic zone with its bad nodes relabeled bottom is a term encoding.
"""
from pbpo_trs.fixtures import (THREE_ZONE_SIG, confluence_graph, confluence_trs, relabel_host,
                               three_zone_graph)
from pbpo_trs.zoning import (classify_nodes, compute_zoning, drop_cycles, undirected_cycle_edges,
                             zone_to_term)


def show(sig, G, title):
    print(f"== {title}")
    cls = classify_nodes(sig, G)
    print("   good:", sorted(v for v, c in cls.items() if c.good),
          " bad:", sorted(v for v, c in cls.items() if not c.good))
    z = compute_zoning(sig, G)
    for k in z.zones():
        print(f"   zone {sorted(z.zone_vertices(k))} root {z.roots[k]} as term: {zone_to_term(sig, G, z, k)}")
    print("   bridges:", sorted(z.bridges), "\n")


def main():
    show(THREE_ZONE_SIG, three_zone_graph(), "f -> a <- f")
    show(confluence_trs().signature, confluence_graph(), "g -> f -> a <- f <- h")

    G = relabel_host()
    print("== undirected cycles")
    print("   cycle edges of the relabeling host:", sorted(undirected_cycle_edges(G)))
    print("   after drop_cycles:", sorted(drop_cycles(G).edges) or "no edges")


if __name__ == "__main__":
    main()

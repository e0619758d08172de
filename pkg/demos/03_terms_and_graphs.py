"""Term rewriting and its graph encoding step in lockstep.

The system ``a(b(x)) -> b(a(x))`` is run on a term and on the term's
encoding; every graph along the way decodes to the matching term. The same
rule never fires on a directed cycle of a's and b's, even though the cycle
looks locally like an infinite ``a(b(a(b(...))))``.
"""
from pbpo_trs.encoding import decode_term, encode_system, encode_term
from pbpo_trs.engine import apply_at_position, find_matches, rewrite_bounded
from pbpo_trs.fixtures import ab_cycle, ab_four_cycle, ab_trs
from pbpo_trs.terms import all_redexes, format_position, normalize, parse_term


def main():
    trs = ab_trs()
    sig = trs.signature
    rules = [e.rule for e in encode_system(trs)]
    s = parse_term("a(a(b(b(c))))", sig)
    nf, n = normalize(trs, s)
    print(f"term level: {s} ->* {nf} in {n} steps")

    trace = rewrite_bounded(rules, encode_term(sig, s).graph)
    print("graph level:")
    for g in trace.graphs:
        print("   ", decode_term(g, sig))

    print("\nredex positions of a(b(a(b(c)))):",
          [format_position(p) for _, p in all_redexes(trs, parse_term("a(b(a(b(c))))", sig))])
    er = encode_system(trs)[0]
    enc = encode_term(sig, parse_term("a(b(c))", sig))
    print("a(b(c)) at eps:", decode_term(apply_at_position(er, enc, ()), sig))
    print("a(b(c)) at 1:  ", apply_at_position(er, enc, (1,)))

    print("\nstrong matches on the 2-cycle:", len(find_matches(er.rule, ab_cycle())))
    print("strong matches on the 4-cycle:", len(find_matches(er.rule, ab_four_cycle())))
    print("(the pattern embeds into the 4-cycle, but the cycle edge back into the\n"
          " pattern cannot be typed by L', so there is no adherence)")


if __name__ == "__main__":
    main()

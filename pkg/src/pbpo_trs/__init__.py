"""PBPO+ graph rewriting over flat-lattice-labeled graphs, with an encoding of
linear term rewriting systems and the zoning analysis behind its global
termination behaviour."""
from .lattice import BOTTOM, TOP, Label, Signature, base, join, leq, meet
from .graph import (GraphMorphism, LabeledGraph, RootedGraph, are_isomorphic, compose,
                    enumerate_morphisms, identity, is_mono, validate_morphism)
from .catops import (CospanResult, SpanResult, pullback, pushout, verify_pullback_universal,
                     verify_pushout_universal)
from .terms import (App, Trs, TrsRule, Var, all_redexes, apply_substitution, is_linear,
                    parse_term, parse_trs, rewrite_at, subterm_at)
from .engine import (PbpoRule, RewriteStep, apply_at_position, apply_step, find_matches,
                     rewrite_bounded)
from .encoding import (EncodedRule, TermEncoding, decode_term, encode_rule, encode_system,
                       encode_term, interface_graph, lower_context_closure, upper_context_closure)
from .zoning import (Zoning, check_match_in_one_zone, classify_nodes, compute_zoning,
                     drop_cycles, relabel_bad_nodes, undirected_cycle_edges, zone_to_term)

__all__ = [
    "BOTTOM", "TOP", "Label", "Signature", "base", "join", "leq", "meet",
    "GraphMorphism", "LabeledGraph", "RootedGraph", "are_isomorphic", "compose", "enumerate_morphisms",
    "identity", "is_mono", "validate_morphism",
    "CospanResult", "SpanResult", "pullback", "pushout", "verify_pullback_universal", "verify_pushout_universal",
    "App", "Trs", "TrsRule", "Var", "all_redexes", "apply_substitution", "is_linear", "parse_term", "parse_trs",
    "rewrite_at", "subterm_at",
    "PbpoRule", "RewriteStep", "apply_at_position", "apply_step", "find_matches", "rewrite_bounded",
    "EncodedRule", "TermEncoding", "decode_term", "encode_rule", "encode_system", "encode_term",
    "interface_graph", "lower_context_closure", "upper_context_closure",
    "Zoning", "check_match_in_one_zone", "classify_nodes", "compute_zoning", "drop_cycles",
    "relabel_bad_nodes", "undirected_cycle_edges", "zone_to_term",
]

__version__ = "0.1.0"

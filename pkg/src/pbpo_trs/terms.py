"""Linear first-order terms and plain term rewriting.

This is the reference semantics the graph encoding is checked against.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from .lattice import Signature, is_identifier

__all__ = [
    "Var", "App", "Term", "Position", "TrsRule", "Trs", "TermError", "ParseError",
    "variables", "is_linear", "subterm_at", "replace_at", "positions",
    "apply_substitution", "match", "rewrite_at", "all_redexes", "normalize",
    "parse_term", "parse_trs", "format_trs", "format_position", "parse_position",
    "rename_canonically", "HOLE", "plug", "size",
]


class TermError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        if not self.args:
            return self.symbol
        return f"{self.symbol}({', '.join(map(str, self.args))})"


Term = Union[Var, App]
Position = tuple  # tuple[int, ...]; () is the root

# Contexts are terms containing this variable exactly once.
HOLE = Var("[]")


def format_position(p: Position) -> str:
    if not p:
        return "eps"
    if all(i < 10 for i in p):
        return "".join(map(str, p))
    return "." + ".".join(map(str, p))


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("", "eps", "ε"):
        return ()
    if text.startswith("."):
        return tuple(int(x) for x in text[1:].split("."))
    if not text.isdigit() or "0" in text:
        raise ValueError(f"bad position {text!r}")
    return tuple(int(c) for c in text)


def variables(t: Term) -> list[str]:
    """Variables in left-to-right order of occurrence (with repetitions)."""
    out: list[str] = []
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.append(u.name)
        else:
            stack.extend(reversed(u.args))
    return out


def size(t: Term) -> int:
    """Number of symbol occurrences (variables excluded)."""
    if isinstance(t, Var):
        return 0
    return 1 + sum(size(a) for a in t.args)


def is_linear(t: Term) -> bool:
    vs = variables(t)
    return len(vs) == len(set(vs))


def check_term(sig: Signature, t: Term) -> None:
    if isinstance(t, Var):
        return
    if t.symbol not in sig:
        raise TermError(f"unknown symbol {t.symbol}")
    if len(t.args) != sig[t.symbol]:
        raise TermError(f"{t.symbol} expects {sig[t.symbol]} arguments, got {len(t.args)}")
    for a in t.args:
        check_term(sig, a)


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if isinstance(t, Var) or not 1 <= i <= len(t.args):
            raise TermError(f"invalid position {format_position(p)}")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Position, new: Term) -> Term:
    if not p:
        return new
    if isinstance(t, Var) or not 1 <= p[0] <= len(t.args):
        raise TermError(f"invalid position {format_position(p)}")
    i = p[0] - 1
    args = list(t.args)
    args[i] = replace_at(args[i], p[1:], new)
    return App(t.symbol, tuple(args))


def positions(t: Term) -> list[Position]:
    """All positions, children before parents, left to right (post-order)."""
    out: list[Position] = []

    def walk(u, p):
        if isinstance(u, App):
            for i, a in enumerate(u.args, 1):
                walk(a, p + (i,))
        out.append(p)

    walk(t, ())
    return out


def plug(context: Term, t: Term) -> Term:
    """``C[t]`` for a context containing :data:`HOLE` once."""
    p = hole_position(context)
    return replace_at(context, p, t)


def hole_position(context: Term) -> Position:
    found = [p for p in positions(context) if subterm_at(context, p) == HOLE]
    if len(found) != 1:
        raise TermError("context must contain exactly one hole")
    return found[0]


def apply_substitution(t: Term, sigma: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    return App(t.symbol, tuple(apply_substitution(a, sigma) for a in t.args))


def match(pattern: Term, t: Term) -> dict[str, Term] | None:
    """Syntactic matching of a linear pattern; ``None`` if it fails."""
    sigma: dict[str, Term] = {}
    stack = [(pattern, t)]
    while stack:
        p, u = stack.pop()
        if isinstance(p, Var):
            # linear patterns bind each variable once
            assert p.name not in sigma, f"non-linear pattern binds {p.name} twice"
            sigma[p.name] = u
        elif isinstance(u, App) and u.symbol == p.symbol and len(u.args) == len(p.args):
            stack.extend(zip(p.args, u.args))
        else:
            return None
    return sigma


@dataclass(frozen=True)
class TrsRule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise TermError("left-hand side must not be a variable")
        if not set(variables(self.rhs)) <= set(variables(self.lhs)):
            extra = sorted(set(variables(self.rhs)) - set(variables(self.lhs)))
            raise TermError(f"right-hand side introduces variables {', '.join(extra)}")
        for side, term in (("left", self.lhs), ("right", self.rhs)):
            seen = set()
            for v in variables(term):
                if v in seen:
                    raise TermError(f"non-linear rule: variable {v} repeated on the {side}-hand side")
                seen.add(v)

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"


@dataclass(frozen=True)
class Trs:
    signature: Signature
    rules: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for r in self.rules:
            check_term(self.signature, r.lhs)
            check_term(self.signature, r.rhs)
            for v in variables(r.lhs):
                if v in self.signature:
                    raise TermError(f"variable {v} clashes with a symbol")


def rewrite_at(trs: Trs, t: Term, rule_index: int, p: Position) -> Term | None:
    rule = trs.rules[rule_index]
    sigma = match(rule.lhs, subterm_at(t, p))
    if sigma is None:
        return None
    return replace_at(t, p, apply_substitution(rule.rhs, sigma))


def all_redexes(trs: Trs, t: Term) -> list[tuple[int, Position]]:
    """Every ``(rule_index, position)`` with a match, leftmost-innermost first."""
    out = []
    for p in positions(t):
        sub = subterm_at(t, p)
        for i, rule in enumerate(trs.rules):
            if match(rule.lhs, sub) is not None:
                out.append((i, p))
    return out


def normalize(trs: Trs, t: Term, max_steps: int = 10_000) -> tuple[Term, int]:
    """Leftmost-innermost reduction; returns the final term and the step count."""
    steps = 0
    while steps < max_steps:
        redexes = all_redexes(trs, t)
        if not redexes:
            break
        i, p = redexes[0]
        t = rewrite_at(trs, t, i, p)
        steps += 1
    return t, steps


def rename_canonically(t: Term, prefix: str = "x") -> Term:
    """Rename variables to ``x1, x2, ...`` in order of first occurrence."""
    table: dict[str, Term] = {}
    for v in variables(t):
        if v not in table:
            table[v] = Var(f"{prefix}{len(table) + 1}")
    return apply_substitution(t, table)


# --- text format -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->)|([A-Za-z0-9_]+)|(\()|(\))|(,))")


def _tokenize(text: str, line: int | None):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r}", line)
        pos = m.end()
        out.append(next(g for g in m.groups() if g is not None))
    return out


def _parse_term_tokens(tokens: list[str], i: int, sig: Signature, line):
    if i >= len(tokens):
        raise ParseError("unexpected end of term", line)
    name = tokens[i]
    if not is_identifier(name):
        raise ParseError(f"expected identifier, got {name!r}", line)
    i += 1
    args = []
    if i < len(tokens) and tokens[i] == "(":
        i += 1
        if i < len(tokens) and tokens[i] == ")":
            i += 1
        else:
            while True:
                arg, i = _parse_term_tokens(tokens, i, sig, line)
                args.append(arg)
                if i < len(tokens) and tokens[i] == ",":
                    i += 1
                    continue
                if i < len(tokens) and tokens[i] == ")":
                    i += 1
                    break
                raise ParseError("expected ',' or ')'", line)
    if name in sig:
        if len(args) != sig[name]:
            raise ParseError(f"{name} expects {sig[name]} arguments, got {len(args)}", line)
        return App(name, tuple(args)), i
    if args:
        raise ParseError(f"undeclared function symbol {name}", line)
    return Var(name), i


def parse_term(text: str, sig: Signature, line: int | None = None) -> Term:
    tokens = _tokenize(text, line)
    t, i = _parse_term_tokens(tokens, 0, sig, line)
    if i != len(tokens):
        raise ParseError(f"trailing input {' '.join(tokens[i:])!r}", line)
    return t


def parse_trs(text: str) -> Trs:
    """Parse ``sig f/2 g/1 a/0`` lines and ``lhs -> rhs`` rule lines."""
    arities: dict[str, int] = {}
    pending: list[tuple[int, str]] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("sig ") or line == "sig":
            for decl in line.split()[1:]:
                name, _, ar = decl.partition("/")
                if not ar.isdigit() or not is_identifier(name):
                    raise ParseError(f"bad signature entry {decl!r}", n)
                if name in arities and arities[name] != int(ar):
                    raise ParseError(f"symbol {name} declared with two arities", n)
                arities[name] = int(ar)
        else:
            pending.append((n, line))
    sig = Signature(arities)
    rules = []
    for n, line in pending:
        if line.count("->") != 1:
            raise ParseError("rule must have the form lhs -> rhs", n)
        left, right = line.split("->")
        lhs = parse_term(left, sig, n)
        rhs = parse_term(right, sig, n)
        try:
            rules.append(TrsRule(lhs, rhs))
        except TermError as exc:
            raise ParseError(str(exc), n) from None
    return Trs(sig, tuple(rules))


def format_trs(trs: Trs) -> str:
    lines = ["sig " + " ".join(f"{k}/{v}" for k, v in trs.signature.items())]
    lines += [str(r) for r in trs.rules]
    return "\n".join(lines) + "\n"

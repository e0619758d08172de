"""Flat lattice labels.

A flat lattice over a base set puts ``BOTTOM`` below and ``TOP`` above a set of
pairwise incomparable base labels. Base labels are either signature symbols
(strings) or positive integers (argument positions), kept disjoint by
refusing digit-only symbol names.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

__all__ = [
    "Label", "BOTTOM", "TOP", "base", "leq", "join", "meet",
    "Signature", "parse_label", "format_label",
]

BaseValue = Union[str, int]

_BOTTOM, _BASE, _TOP = 0, 1, 2
_SYMBOL_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True, order=False)
class Label:
    kind: int
    value: BaseValue | None = None

    def __post_init__(self):
        if self.kind == _BASE:
            v = self.value
            if isinstance(v, bool) or not isinstance(v, (str, int)):
                raise TypeError(f"base label payload must be str or int, got {v!r}")
            if isinstance(v, int) and v < 1:
                raise ValueError(f"integer labels must be positive, got {v}")
            if isinstance(v, str) and not v:
                raise ValueError("empty symbol label")
        elif self.kind in (_BOTTOM, _TOP):
            if self.value is not None:
                raise ValueError("bottom/top carry no payload")
        else:
            raise ValueError(f"unknown label kind {self.kind}")

    @property
    def is_bottom(self) -> bool:
        return self.kind == _BOTTOM

    @property
    def is_top(self) -> bool:
        return self.kind == _TOP

    @property
    def is_base(self) -> bool:
        return self.kind == _BASE

    @property
    def is_symbol(self) -> bool:
        return self.kind == _BASE and isinstance(self.value, str)

    @property
    def is_int(self) -> bool:
        return self.kind == _BASE and isinstance(self.value, int)

    def sort_key(self):
        # total order for deterministic output only; unrelated to leq
        if self.kind != _BASE:
            return (self.kind, 0, "")
        if isinstance(self.value, int):
            return (1, 0, f"{self.value:020d}")
        return (1, 1, self.value)

    def __str__(self):
        return format_label(self)

    def __repr__(self):
        if self.kind == _BOTTOM:
            return "BOTTOM"
        if self.kind == _TOP:
            return "TOP"
        return f"base({self.value!r})"


BOTTOM = Label(_BOTTOM)
TOP = Label(_TOP)


def base(value: BaseValue) -> Label:
    return Label(_BASE, value)


def leq(a: Label, b: Label) -> bool:
    return a == b or a.kind == _BOTTOM or b.kind == _TOP


def join(labels: Iterable[Label]) -> Label:
    """Least upper bound; ``BOTTOM`` for the empty collection."""
    seen = None
    for lab in labels:
        if lab.kind == _TOP:
            return TOP
        if lab.kind == _BOTTOM:
            continue
        if seen is None:
            seen = lab
        elif seen != lab:
            return TOP
    return BOTTOM if seen is None else seen


def meet(labels: Iterable[Label]) -> Label:
    """Greatest lower bound; ``TOP`` for the empty collection."""
    seen = None
    for lab in labels:
        if lab.kind == _BOTTOM:
            return BOTTOM
        if lab.kind == _TOP:
            continue
        if seen is None:
            seen = lab
        elif seen != lab:
            return BOTTOM
    return TOP if seen is None else seen


def format_label(lab: Label) -> str:
    if lab.kind == _BOTTOM:
        return "_|_"
    if lab.kind == _TOP:
        return "^T^"
    return str(lab.value)


def parse_label(text: str) -> Label:
    text = text.strip()
    if text == "_|_":
        return BOTTOM
    if text == "^T^":
        return TOP
    if text.isdigit():
        return base(int(text))
    if not text or any(c.isspace() for c in text):
        raise ValueError(f"bad label {text!r}")
    return base(text)


class Signature(Mapping[str, int]):
    """Finite map from function symbol to arity."""

    def __init__(self, arities: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = arities.items() if isinstance(arities, Mapping) else arities
        table: dict[str, int] = {}
        for name, arity in items:
            if not isinstance(name, str) or not _SYMBOL_RE.match(name):
                raise ValueError(f"invalid symbol name {name!r}")
            if not isinstance(arity, int) or isinstance(arity, bool) or arity < 0:
                raise ValueError(f"invalid arity {arity!r} for {name}")
            if name in table:
                raise ValueError(f"symbol {name} declared twice")
            table[name] = arity
        self._arities = table

    def __getitem__(self, name: str) -> int:
        return self._arities[name]

    def __iter__(self):
        return iter(self._arities)

    def __len__(self):
        return len(self._arities)

    def __eq__(self, other):
        if isinstance(other, Signature):
            return self._arities == other._arities
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._arities.items()))

    def __repr__(self):
        inner = " ".join(f"{k}/{v}" for k, v in self._arities.items())
        return f"Signature({inner})"

    def union(self, other: "Signature") -> "Signature":
        merged = dict(self._arities)
        for k, v in other.items():
            if merged.get(k, v) != v:
                raise ValueError(f"conflicting arities for {k}")
            merged[k] = v
        return Signature(merged)

    def labels(self) -> list[Label]:
        return [base(s) for s in self._arities]

    def arity_of(self, lab: Label) -> int | None:
        """Arity of a symbol label, ``None`` for anything outside the signature."""
        if lab.is_symbol and lab.value in self._arities:
            return self._arities[lab.value]
        return None


def is_identifier(name: str) -> bool:
    return bool(_SYMBOL_RE.match(name))

"""Triple view of an AMR graph, as consumed by SMATCH."""

from __future__ import annotations

from enum import Enum
from typing import NamedTuple

from .graph import AmrGraph, Literal, Variable, invert_role, is_inverted


class TripleKind(Enum):
    INSTANCE = "instance"
    ATTRIBUTE = "attribute"
    RELATION = "relation"
    TOP = "top"


class AmrTriple(NamedTuple):
    kind: TripleKind
    subject: str
    role: str
    object: str


def extract_triples(graph: AmrGraph, include_top: bool = True) -> tuple[AmrTriple, ...]:
    """One instance triple per variable, one triple per edge, optionally TOP.

    Inverse relations (``:ARG0-of``) are normalised to their forward form
    with subject and object swapped, so ``(a :ARG0-of b)`` and
    ``(b :ARG0 a)`` produce the same triple. Attribute objects are compared
    by value: a literal ``"5"`` and a constant ``5`` coincide. Duplicate
    edges collapse to one triple.
    """
    out: list[AmrTriple] = []
    seen = set()

    def add(t):
        if t not in seen:
            seen.add(t)
            out.append(t)

    for var, concept in graph.instances.items():
        add(AmrTriple(TripleKind.INSTANCE, var, "instance", concept))
    for e in graph.edges:
        if isinstance(e.target, Variable):
            if is_inverted(e.role):
                add(AmrTriple(TripleKind.RELATION, e.target.id, invert_role(e.role), e.source))
            else:
                add(AmrTriple(TripleKind.RELATION, e.source, e.role, e.target.id))
        else:
            value = e.target.value if isinstance(e.target, Literal) else str(e.target)
            add(AmrTriple(TripleKind.ATTRIBUTE, e.source, e.role, value))
    if include_top:
        add(AmrTriple(TripleKind.TOP, graph.root, "TOP", graph.instances[graph.root]))
    return tuple(out)

"""AMR graph value types and the shared depth-first traversal."""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Mapping, NamedTuple, Union

from ..errors import AmrError

VARIABLE_RE = re.compile(r"[a-z][a-z0-9]*\Z")
SENSE_RE = re.compile(r"(.+)-\d{2}\Z")

# Roles whose "-of" suffix is lexical rather than an inversion marker.
NON_INVERTED_OF_ROLES = frozenset({":consist-of", ":prep-on-behalf-of", ":prep-out-of", ":subset-of"})


@dataclass(frozen=True)
class Variable:
    id: str

    def __str__(self):
        return self.id


@dataclass(frozen=True)
class Constant:
    """Unquoted atom: ``-``, ``imperative``, numbers."""

    value: str

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Literal:
    """Quoted string; ``value`` holds the unquoted text."""

    value: str

    def __str__(self):
        return quote(self.value)


EdgeTarget = Union[Variable, Constant, Literal]


class Edge(NamedTuple):
    source: str
    role: str
    target: EdgeTarget


def quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def strip_sense(concept: str) -> str:
    """Remove a trailing two-digit PropBank sense, e.g. ``say-01`` -> ``say``."""
    m = SENSE_RE.match(concept)
    return m.group(1) if m else concept


def is_inverted(role: str) -> bool:
    return role.endswith("-of") and role not in NON_INVERTED_OF_ROLES


def invert_role(role: str) -> str:
    if is_inverted(role):
        return role[: -len("-of")]
    return role + "-of"


@dataclass(frozen=True, eq=False)
class AmrGraph:
    """Rooted, labeled, directed graph in which each variable has one concept.

    ``edges`` keeps source order. Instances are exposed read-only.
    """

    root: str
    instances: Mapping[str, str]
    edges: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "instances", MappingProxyType(dict(self.instances)))
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        self._check()

    def _check(self):
        if self.root not in self.instances:
            raise AmrError(f"root {self.root!r} has no instance")
        for var, concept in self.instances.items():
            if not VARIABLE_RE.match(var):
                raise AmrError(f"invalid variable id {var!r}")
            if not isinstance(concept, str) or not concept:
                raise AmrError(f"variable {var!r} has an empty concept")
        for e in self.edges:
            if e.source not in self.instances:
                raise AmrError(f"edge source {e.source!r} is not a variable")
            if not e.role.startswith(":") or len(e.role) < 2:
                raise AmrError(f"invalid role {e.role!r}")
            if not isinstance(e.target, (Variable, Constant, Literal)):
                raise AmrError(f"invalid edge target {e.target!r}")
            if isinstance(e.target, Variable) and e.target.id not in self.instances:
                raise AmrError(f"edge target {e.target.id!r} is not a variable")

    @property
    def variables(self) -> list[str]:
        return list(self.instances)

    def concept(self, var: str) -> str:
        return self.instances[var]

    def outgoing(self, var: str) -> list[Edge]:
        return [e for e in self.edges if e.source == var]

    def __eq__(self, other):
        if not isinstance(other, AmrGraph):
            return NotImplemented
        return (
            self.root == other.root
            and dict(self.instances) == dict(other.instances)
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.root, tuple(self.instances.items()), self.edges))

    def __repr__(self):
        from .penman import serialize_penman

        return f"AmrGraph({serialize_penman(self, indent=None)!r})"


def unreachable_variables(graph: AmrGraph) -> list[str]:
    """Variables not connected to the root when edges are followed either way."""
    neighbours: dict[str, list[str]] = {v: [] for v in graph.instances}
    for e in graph.edges:
        if isinstance(e.target, Variable):
            neighbours[e.source].append(e.target.id)
            neighbours[e.target.id].append(e.source)
    seen = {graph.root}
    stack = [graph.root]
    while stack:
        for w in neighbours[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return [v for v in graph.instances if v not in seen]


def connect(graph: AmrGraph) -> AmrGraph:
    """Attach every disconnected component to the root with ``:mod``.

    Emits a warning when anything had to be attached.
    """
    loose = unreachable_variables(graph)
    if not loose:
        return graph
    edges = list(graph.edges)
    while loose:
        head = loose[0]
        warnings.warn(f"variable {head!r} is disconnected from the root; attaching via :mod", stacklevel=2)
        edges.append(Edge(graph.root, ":mod", Variable(head)))
        graph = AmrGraph(graph.root, graph.instances, edges)
        loose = unreachable_variables(graph)
    return graph


# Traversal -----------------------------------------------------------------


@dataclass
class Node:
    """A variable expanded at its first visit in the depth-first walk."""

    var: str
    concept: str
    children: list = field(default_factory=list)  # list of (role, Node | Ref | Constant | Literal)


@dataclass(frozen=True)
class Ref:
    """A later visit of an already-expanded variable (re-entrancy)."""

    var: str


def _orientation(graph: AmrGraph) -> set[int]:
    """Indices of edges that must be emitted inverted to reach every variable.

    Forward-reachable graphs need none. Otherwise the first edge (in stored
    order) from an unreached variable into the reached set gets flipped,
    repeatedly, until everything is reached.
    """
    forward: dict[str, list[str]] = {v: [] for v in graph.instances}
    for e in graph.edges:
        if isinstance(e.target, Variable):
            forward[e.source].append(e.target.id)

    reached: set[str] = set()

    def reach(start):
        stack = [start]
        reached.add(start)
        while stack:
            for w in forward[stack.pop()]:
                if w not in reached:
                    reached.add(w)
                    stack.append(w)

    reach(graph.root)
    flipped: set[int] = set()
    while len(reached) < len(graph.instances):
        for i, e in enumerate(graph.edges):
            if (
                isinstance(e.target, Variable)
                and e.source not in reached
                and e.target.id in reached
            ):
                flipped.add(i)
                reach(e.source)
                break
        else:
            missing = [v for v in graph.instances if v not in reached]
            raise AmrError(f"graph is disconnected; unreachable variables: {missing}")
    return flipped


def traverse(graph: AmrGraph) -> Node:
    """Depth-first spanning tree from the root in stored edge order.

    Each variable is expanded once, at its first visit; later visits become
    :class:`Ref`. Edges that can only be reached against their direction are
    emitted at their target with the inverted role.
    """
    flipped = _orientation(graph)
    emitted: dict[str, list[tuple[str, EdgeTarget]]] = {v: [] for v in graph.instances}
    for i, e in enumerate(graph.edges):
        if i in flipped:
            emitted[e.target.id].append((invert_role(e.role), Variable(e.source)))
        else:
            emitted[e.source].append((e.role, e.target))

    root = Node(graph.root, graph.instances[graph.root])
    expanded = {graph.root}
    stack = [(root, iter(emitted[graph.root]))]
    while stack:
        node, pending = stack[-1]
        item = next(pending, None)
        if item is None:
            stack.pop()
            continue
        role, target = item
        if not isinstance(target, Variable):
            node.children.append((role, target))
        elif target.id in expanded:
            node.children.append((role, Ref(target.id)))
        else:
            expanded.add(target.id)
            child = Node(target.id, graph.instances[target.id])
            node.children.append((role, child))
            stack.append((child, iter(emitted[target.id])))
    return root


def walk(tree: Node) -> Iterator[tuple[str | None, object]]:
    """Yield ``(role, item)`` in pre-order; the root comes with role ``None``."""
    stack = [(None, tree)]
    while stack:
        role, item = stack.pop()
        yield role, item
        if isinstance(item, Node):
            stack.extend(reversed(item.children))


# JSON records ---------------------------------------------------------------


def _target_record(t):
    if isinstance(t, Variable):
        return {"var": t.id}
    if isinstance(t, Literal):
        return {"literal": t.value}
    return {"const": t.value}


def graph_to_record(graph: AmrGraph) -> dict:
    """Plain-JSON form: root, instances in order, edges as ``[source, role, target]``."""
    return {
        "root": graph.root,
        "instances": [[v, c] for v, c in graph.instances.items()],
        "edges": [[e.source, e.role, _target_record(e.target)] for e in graph.edges],
    }


def graph_from_record(record) -> AmrGraph:
    try:
        edges = []
        for source, role, target in record["edges"]:
            ((kind, value),) = target.items()
            cls = {"var": lambda v: Variable(v), "literal": Literal, "const": Constant}[kind]
            edges.append(Edge(source, role, cls(value)))
        return AmrGraph(record["root"], {v: c for v, c in record["instances"]}, tuple(edges))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, AmrError):
            raise
        raise AmrError(f"malformed graph record: {exc!r}") from None

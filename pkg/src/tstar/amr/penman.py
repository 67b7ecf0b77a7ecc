"""Penman notation: parsing, serialization and block files."""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterator

from ..errors import DuplicateVariableError, PenmanSyntaxError, UndefinedVariableError
from .graph import AmrGraph, Constant, Edge, Literal, Node, Ref, Variable, traverse

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<slash>/)
  | (?P<literal>"(?:[^"\\]|\\.)*")
  | (?P<role>:[^\s()"]+)
  | (?P<symbol>[^\s()"/:][^\s()"/]*)
  | (?P<bad>.)
    """,
    re.VERBOSE | re.DOTALL,
)

# Unquoted symbols of this shape are taken as variable references, so an
# undefined one is an error rather than a silently accepted constant.
_REFERENCE_LIKE = re.compile(r"[a-z][a-z]?\d*\Z")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Split Penman text into ``(kind, value, offset)`` tokens."""
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            if m.group() == '"':
                raise PenmanSyntaxError("unterminated string literal", m.start(), text)
            raise PenmanSyntaxError(f"unexpected character {m.group()!r}", m.start(), text)
        tokens.append((kind, m.group(), m.start()))
    return tokens


def unquote(token: str) -> str:
    return re.sub(r"\\(.)", r"\1", token[1:-1])


def strip_comments(text: str) -> str:
    return "\n".join(line for line in text.splitlines() if not line.lstrip().startswith("#"))


def parse_penman(text: str) -> AmrGraph:
    """Parse a single Penman s-expression.

    Edge order follows the text: an edge is recorded when its role is read,
    before the edges of any nested node.

    Raises
    ------
    PenmanSyntaxError
        On malformed input, with the offending position. The subclasses
        :class:`DuplicateVariableError` and :class:`UndefinedVariableError`
        flag double definitions and dangling references.
    """
    text = strip_comments(text)
    toks = tokenize(text)
    if not toks:
        raise PenmanSyntaxError("empty input")

    instances: dict[str, str] = {}
    edges: list[tuple[str, str, tuple[str, str, int]]] = []
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def expect(kind, what):
        nonlocal pos
        tok = peek()
        if tok is None:
            raise PenmanSyntaxError(f"unbalanced parentheses: expected {what} at end of input", len(text), text)
        if tok[0] != kind:
            raise PenmanSyntaxError(f"expected {what}, found {tok[1]!r}", tok[2], text)
        pos += 1
        return tok

    def node() -> str:
        nonlocal pos
        expect("lparen", "'('")
        _, var, offset = expect("symbol", "variable")
        if not re.match(r"[a-z][a-z0-9]*\Z", var):
            raise PenmanSyntaxError(f"invalid variable id {var!r}", offset, text)
        if var in instances:
            raise DuplicateVariableError(f"variable {var!r} defined twice", offset, text)
        expect("slash", "'/'")
        kind, concept, offset = peek() or (None, None, len(text))
        if kind not in ("symbol", "literal"):
            raise PenmanSyntaxError("expected concept", offset, text)
        pos += 1
        instances[var] = unquote(concept) if kind == "literal" else concept
        while True:
            tok = peek()
            if tok is None:
                raise PenmanSyntaxError("unbalanced parentheses: missing ')'", len(text), text)
            kind, value, offset = tok
            if kind == "rparen":
                pos += 1
                return var
            if kind != "role":
                raise PenmanSyntaxError(f"expected role or ')', found {value!r}", offset, text)
            pos += 1
            target = peek()
            if target is None:
                raise PenmanSyntaxError(f"role {value} has no value", len(text), text)
            if target[0] == "lparen":
                slot = len(edges)
                edges.append((var, value, None))
                child = node()
                edges[slot] = (var, value, ("var", child, target[2]))
            elif target[0] in ("symbol", "literal"):
                pos += 1
                edges.append((var, value, target))
            else:
                raise PenmanSyntaxError(f"role {value} has no value", target[2], text)

    root = node()
    if pos < len(toks):
        kind, value, offset = toks[pos]
        if kind == "rparen":
            raise PenmanSyntaxError("unbalanced parentheses: unexpected ')'", offset, text)
        raise PenmanSyntaxError(f"unexpected content after graph: {value!r}", offset, text)

    resolved = []
    for source, role, (kind, value, offset) in edges:
        if kind == "var":
            target = Variable(value)
        elif kind == "literal":
            target = Literal(unquote(value))
        elif value in instances:
            target = Variable(value)
        elif _REFERENCE_LIKE.match(value):
            raise UndefinedVariableError(f"reference to undefined variable {value!r}", offset, text)
        else:
            target = Constant(value)
        resolved.append(Edge(source, role, target))
    return AmrGraph(root, instances, resolved)


def _atom(target) -> str:
    if isinstance(target, Ref):
        return target.var
    return str(target)


def serialize_penman(graph: AmrGraph, indent: int | None = 4) -> str:
    """Render ``graph`` in Penman notation.

    With ``indent=None`` the graph is written on one line. Re-entrant
    variables are written as bare ids after their first occurrence.
    """
    tree = traverse(graph)
    parts: list[str] = []

    def emit(node: Node, depth: int):
        parts.append(f"({node.var} / {node.concept}")
        for role, child in node.children:
            if indent is None:
                parts.append(" ")
            else:
                parts.append("\n" + " " * (indent * (depth + 1)))
            parts.append(role + " ")
            if isinstance(child, Node):
                emit(child, depth + 1)
            else:
                parts.append(_atom(child))
        parts.append(")")

    # Nesting depth is bounded by the variable count; AMRs stay far below the
    # recursion limit, so a recursive writer keeps this readable.
    emit(tree, 0)
    return "".join(parts)


def canonical_penman(graph: AmrGraph) -> str:
    return serialize_penman(graph, indent=None)


# Block files --------------------------------------------------------------


def split_blocks(text: str) -> list[str]:
    """Split text into blank-line separated blocks, dropping ``#`` comment lines.

    Blocks consisting only of comments are discarded.
    """
    blocks, current = [], []
    for line in text.splitlines():
        if not line.strip():
            if current:
                blocks.append("\n".join(current))
                current = []
            continue
        if line.lstrip().startswith("#"):
            continue
        current.append(line)
    if current:
        blocks.append("\n".join(current))
    return blocks


def read_penman_blocks(path) -> list[str]:
    return split_blocks(Path(path).read_text(encoding="utf-8"))


def iter_penman_file(path) -> Iterator[AmrGraph]:
    for block in read_penman_blocks(path):
        yield parse_penman(block)


def write_penman_file(path, graphs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n\n".join(serialize_penman(g) for g in graphs))
        fh.write("\n")

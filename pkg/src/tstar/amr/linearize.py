"""DFS linearization with pointer tokens, and a repairing inverse.

A graph is written as a bracketed token sequence. The first visit of a
variable emits ``<pN>`` followed by its concept; later visits emit the
pointer alone::

    ( <p0> eat-01 :ARG0 ( <p1> dog ) )

:func:`delinearize` accepts arbitrary token sequences (model output) and
always returns a valid graph unless nothing usable is left.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from ..errors import PenmanSyntaxError, UnrecoverableAmrError
from .graph import AmrGraph, Constant, Edge, Literal, Node, Ref, Variable, connect, traverse
from .penman import tokenize as tokenize_penman

log = logging.getLogger(__name__)

POINTER_RE = re.compile(r"<p(\d+)>\Z")
UNKNOWN_CONCEPT = "amr-unknown"
MULTI_ROOT_CONCEPT = "multi-sentence"

_SPLIT_RE = re.compile(r'"(?:[^"\\]|\\.)*"|\S+')


@dataclass(frozen=True)
class LinearizedAmr:
    tokens: tuple

    def __str__(self):
        return " ".join(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self):
        return len(self.tokens)

    @classmethod
    def from_string(cls, text: str) -> "LinearizedAmr":
        return cls(tuple(split_linearized(text)))


def split_linearized(text: str) -> list[str]:
    """Whitespace split that keeps quoted literals (which may contain spaces) whole."""
    return _SPLIT_RE.findall(text)


def is_pointer(token: str) -> bool:
    return POINTER_RE.match(token) is not None


def is_role(token: str) -> bool:
    return token.startswith(":") and len(token) > 1


def linearize_dfs(graph: AmrGraph) -> LinearizedAmr:
    tree = traverse(graph)
    pointers: dict[str, str] = {}
    out: list[str] = []

    def emit(node: Node):
        pointers[node.var] = f"<p{len(pointers)}>"
        out.extend(("(", pointers[node.var], node.concept))
        for role, child in node.children:
            out.append(role)
            if isinstance(child, Node):
                emit(child)
            elif isinstance(child, Ref):
                out.append(pointers[child.var])
            else:
                out.append(str(child))
        out.append(")")

    emit(tree)
    return LinearizedAmr(tuple(out))


def _fresh_id(concept: str, taken: set[str]) -> str:
    head = concept[0].lower() if concept and "a" <= concept[0].lower() <= "z" else "x"
    if head not in taken:
        taken.add(head)
        return head
    n = 2
    while f"{head}{n}" in taken:
        n += 1
    taken.add(f"{head}{n}")
    return f"{head}{n}"


def delinearize(tokens, repairs: list | None = None) -> AmrGraph:
    """Rebuild a graph from a linearized token sequence, repairing as needed.

    Repairs, each recorded as a message in ``repairs`` (when given) and
    logged at WARNING level:

    * frames still open at the end are closed, surplus ``)`` are ignored;
    * a role with no operand is dropped;
    * a pointer used before definition gets the concept ``amr-unknown``
      (a later definition of it is read as a reference);
    * a node opened without a role is attached to its parent with ``:mod``;
    * several top-level nodes are wrapped under a ``multi-sentence`` root;
    * stray tokens are dropped.

    Raises
    ------
    UnrecoverableAmrError
        If the sequence contains no node at all.
    """
    if isinstance(tokens, str):
        tokens = split_linearized(tokens)
    tokens = list(tokens)
    notes: list[str] = [] if repairs is None else repairs
    start = len(notes)

    def note(msg):
        notes.append(msg)

    instances: dict[str, str] = {}
    edges: list[Edge] = []
    pointer_vars: dict[str, str] = {}
    taken: set[str] = set()
    roots: list[str] = []
    stack: list[str] = []
    role: str | None = None
    i = 0

    def new_var(concept):
        var = _fresh_id(concept, taken)
        instances[var] = concept
        return var

    def attach(target):
        nonlocal role
        if not stack:
            return False
        parent = stack[-1]
        if role is None:
            note(f"node without role under {parent!r}; attached via :mod")
            edges.append(Edge(parent, ":mod", target))
        else:
            edges.append(Edge(parent, role, target))
        role = None
        return True

    def pointer_ref(tok):
        if tok not in pointer_vars:
            note(f"pointer {tok} used before definition; concept {UNKNOWN_CONCEPT}")
            pointer_vars[tok] = new_var(UNKNOWN_CONCEPT)
        return pointer_vars[tok]

    while i < len(tokens):
        tok = tokens[i]
        if tok == "(":
            i += 1
            pointer = None
            concept = None
            if i < len(tokens) and is_pointer(tokens[i]):
                pointer = tokens[i]
                i += 1
            if i < len(tokens) and tokens[i] not in ("(", ")") and not is_role(tokens[i]) and not is_pointer(tokens[i]):
                concept = tokens[i]
                if concept.startswith('"') and concept.endswith('"') and len(concept) >= 2:
                    concept = concept[1:-1] or UNKNOWN_CONCEPT
                i += 1
            if pointer is not None and pointer in pointer_vars:
                var = pointer_vars[pointer]
                note(f"pointer {pointer} defined again; read as a reference")
            else:
                if concept is None:
                    note("node without concept; concept " + UNKNOWN_CONCEPT)
                    concept = UNKNOWN_CONCEPT
                var = new_var(concept)
                if pointer is not None:
                    pointer_vars[pointer] = var
            if stack:
                attach(Variable(var))
            else:
                if role is not None:
                    note(f"dangling role {role} dropped")
                    role = None
                if roots:
                    note("additional top-level node")
                roots.append(var)
            stack.append(var)
            continue
        if tok == ")":
            if role is not None:
                note(f"dangling role {role} dropped")
                role = None
            if stack:
                stack.pop()
            else:
                note("surplus ')' ignored")
            i += 1
            continue
        if is_role(tok):
            if role is not None:
                note(f"dangling role {role} dropped")
            role = tok if stack else None
            if not stack:
                note(f"role {tok} outside any node dropped")
            i += 1
            continue
        if is_pointer(tok):
            if stack and role is not None:
                attach(Variable(pointer_ref(tok)))
            else:
                note(f"stray pointer {tok} dropped")
            i += 1
            continue
        # constant or literal operand
        if stack and role is not None:
            if tok.startswith('"') and tok.endswith('"') and len(tok) >= 2:
                target = Literal(re.sub(r"\\(.)", r"\1", tok[1:-1]))
            else:
                target = Constant(tok)
            attach(target)
        else:
            note(f"stray token {tok!r} dropped")
        i += 1

    if role is not None:
        note(f"dangling role {role} dropped")
    if stack:
        note(f"closed {len(stack)} open frame(s) at end of sequence")
    if not roots:
        raise UnrecoverableAmrError("no node found in token sequence")

    if len(roots) == 1:
        root = roots[0]
    else:
        note(f"{len(roots)} top-level nodes wrapped under {MULTI_ROOT_CONCEPT}")
        root = new_var(MULTI_ROOT_CONCEPT)
        edges.extend(Edge(root, f":snt{k}", Variable(r)) for k, r in enumerate(roots, 1))
        # keep the synthetic root first so the instance order mirrors traversal
        instances = {root: instances.pop(root), **instances}

    graph = connect(AmrGraph(root, instances, edges))
    for msg in notes[start:]:
        log.warning("delinearize repair: %s", msg)
    return graph


def penman_to_tokens(text: str) -> list[str]:
    """Convert (possibly malformed) Penman text to linearized tokens.

    Variable ids become pointers in order of first appearance, so the result
    can go through :func:`delinearize` and pick up its repairs.
    """
    from .penman import strip_comments

    text = strip_comments(text)
    try:
        toks = tokenize_penman(text)
    except PenmanSyntaxError:
        # an unterminated quote: close it and retry once
        toks = tokenize_penman(text + '"')
    defined = set()
    for k, (kind, value, _) in enumerate(toks):
        if kind == "slash" and k > 0 and toks[k - 1][0] == "symbol":
            defined.add(toks[k - 1][1])
    pointers: dict[str, str] = {}

    def ptr(var):
        if var not in pointers:
            pointers[var] = f"<p{len(pointers)}>"
        return pointers[var]

    out: list[str] = []
    k = 0
    while k < len(toks):
        kind, value, _ = toks[k]
        if kind == "symbol" and value in defined and k + 1 < len(toks) and toks[k + 1][0] == "slash":
            out.append(ptr(value))
            k += 2
            continue
        if kind == "slash":
            k += 1
            continue
        if kind == "symbol" and value in defined:
            out.append(ptr(value))
        else:
            out.append(value)
        k += 1
    return out


def repair_penman(text: str, repairs: list | None = None) -> AmrGraph:
    return delinearize(penman_to_tokens(text), repairs)

"""AMR graphs in Penman notation: parse, serialize, linearize, repair."""

from .graph import (
    AmrGraph,
    Constant,
    Edge,
    EdgeTarget,
    Literal,
    Node,
    Ref,
    Variable,
    connect,
    graph_from_record,
    graph_to_record,
    strip_sense,
    traverse,
    unreachable_variables,
    walk,
)
from .linearize import (
    LinearizedAmr,
    delinearize,
    linearize_dfs,
    penman_to_tokens,
    repair_penman,
    split_linearized,
)
from .penman import (
    canonical_penman,
    iter_penman_file,
    parse_penman,
    read_penman_blocks,
    serialize_penman,
    split_blocks,
    write_penman_file,
)
from .triples import AmrTriple, TripleKind, extract_triples

__all__ = [
    "AmrGraph",
    "AmrTriple",
    "Constant",
    "Edge",
    "EdgeTarget",
    "LinearizedAmr",
    "Literal",
    "Node",
    "Ref",
    "TripleKind",
    "Variable",
    "canonical_penman",
    "connect",
    "delinearize",
    "extract_triples",
    "graph_from_record",
    "graph_to_record",
    "iter_penman_file",
    "linearize_dfs",
    "parse_penman",
    "penman_to_tokens",
    "read_penman_blocks",
    "repair_penman",
    "serialize_penman",
    "split_blocks",
    "split_linearized",
    "strip_sense",
    "traverse",
    "unreachable_variables",
    "walk",
    "write_penman_file",
]

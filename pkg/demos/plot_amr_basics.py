"""
AMR graphs, linearization and SMATCH
====================================

Parse a Penman graph, walk it as a token sequence and score two graphs
against each other.
"""

from tstar.amr import delinearize, linearize_dfs, parse_penman, serialize_penman
from tstar.smatch import smatch

# a graph with one re-entrant variable: the boy both wants and goes
g = parse_penman("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))")
print(serialize_penman(g))

# the seq2seq view: pointers replace variable ids, b comes back bare
lin = linearize_dfs(g)
print(lin)

# model output is often broken; the delinearizer closes what is left open
notes = []
fixed = delinearize("( <p0> want-01 :ARG0 ( <p1> boy ) :ARG1 ( <p2> go-02 :ARG0 <p1>", notes)
print(serialize_penman(fixed))
print("repairs:", notes)

# same graph, so SMATCH is 1.0; swapping a concept costs one triple
print(smatch(g, fixed).format())
other = parse_penman("(w / want-01 :ARG0 (b / girl) :ARG1 (g / go-02 :ARG0 b))")
print(smatch(g, other).format())

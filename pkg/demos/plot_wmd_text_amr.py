"""
Word Mover's Distance between a sentence and its AMR
====================================================

Extract content and verbs from both sides and look at the transport plan.
"""

import numpy as np

from tstar.amr import parse_penman
from tstar.wmd import (
    EmbeddingStore,
    extract_amr_content,
    extract_amr_verbs,
    extract_sentence_content,
    wmd_overall,
    wmd_plan,
)

sentence = "the hungry dog ate the bread quickly"
graph = parse_penman("(e / eat-01 :ARG0 (d / dog :mod (h / hungry)) :ARG1 (b / bread) :manner (q / quick))")

print("sentence:", extract_sentence_content(sentence))
print("amr:     ", extract_amr_content(graph))
print("frames:  ", extract_amr_verbs(graph))

# no embedding file needed: every token gets a seeded hash vector
store = EmbeddingStore.hashed(64, seed=0)
print("WMD Overall: %.6f" % wmd_overall(sentence, graph, store))

# where does the mass go?  shared tokens stay put; hash vectors know nothing
# about morphology, so 'ate' and 'quickly' land wherever is cheapest.
# Load real vectors with load_embeddings to see 'ate' pair with 'eat'.
da, db, plan = wmd_plan(extract_sentence_content(sentence), extract_amr_content(graph), store)
np.set_printoptions(precision=3, suppress=True)
print("rows:", da.tokens)
print("cols:", db.tokens)
print(plan.flows)

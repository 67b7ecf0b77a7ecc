"""Shared test data: AMR texts quoted from the reference material and a random graph generator."""

import random

from tstar.amr import AmrGraph, Constant, Edge, Literal, Variable, extract_triples

ANWAR_SENTENCE = (
    "Malaysian vice-prime minister Anwar ended a visit to China this afternoon , "
    "and left Shanghai for Tokyo."
)
# the source prints the frame as "have-org-role- 91"; the space is a typesetting artifact
ANWAR_AMR = """
(a2 / and
  :op1 (e2 / end-01
        :ARG0 (p / person
              :name (n / name
                    :op1 "Anwar")
              :ARG0-of (h / have-org-role-91
                    :ARG1 (c7 / country
                          :name (n3 / name
                                :op1 "Malaysia"))
                    :ARG2 (m / minister
                          :mod (p2 / prime)
                          :mod (v / vice))))
        :ARG1 (v2 / visit-01
              :ARG0 p
              :ARG1 (c6 / country
                    :name (n2 / name
                          :op1 "China")))
        :time (d / date-entity
              :dayperiod (a3 / afternoon)
              :mod (t / today)))
  :op2 (l / leave-11
        :ARG0 p
        :ARG1 (c8 / city
              :name (n4 / name
                    :op1 "Shanghai"))
        :ARG2 (c9 / city
              :name (n5 / name
                    :op1 "Tokyo"))))
"""
ANWAR_SENTENCE_CONTENT = "malaysian vice-prime minister anwar ended visit china afternoon , left shanghai tokyo."
ANWAR_SENTENCE_VERBS = "ended left"
ANWAR_AMR_CONTENT = (
    "and end person name Anwar have-org-role country name Malaysia minister prime vice "
    "visit country name China afternoon today leave city name Shanghai city name Tokyo"
)
ANWAR_AMR_VERBS = "end visit leave"

# "To make us feel existence, and to shew": untuned vs tuned encoder output
SHEW_VANILLA = """(a/and
 :op1(m/make-02
  :ARG1(f/feel-01
   :ARG0(w/we)
   :ARG1(e/exist-01
    :ARG1 w)))
 :op2 (s / shew-01
  :ARG0 w))"""
SHEW_TUNED = """(h/have-purpose-91
 :ARG2(a/and
  :op1(m/make-02
   :ARG1(f/feel-01
    :ARG0(w/we)
    :ARG1(e/exist-01
     :ARG1 w)))
  :op2(s/show-01
   :ARG0 w
   :ARG1 e)))"""
# "But trust not this; too easy Youth, beware!"
BEWARE_VANILLA = """(m/multi-sentence
 :snt1(c/contrast-01
  :ARG2(t/trust-01
   :polarity -
   :mode imperative
   :ARG0(y/you)
   :ARG1(t2/this)))
 :snt2(b/beware-01
  :mode imperative
  :ARG0(y2/youth
   :ARG1-of(e/easy-05
    :ARG2-of(h/have-degree-91
     :ARG1 y2
     :ARG3 (t3/too))))))"""
BEWARE_TUNED = """(c/contrast-01
 :ARG2 (a/and
  :op1 (t/trust-02
   :polarity -
   :mode imperative
   :ARG0 (y/you
    :mod (y2/youth))
   :ARG1 (t2/this))
  :op2 (h/have-degree-91
   :ARG1 t2
   :ARG2 (e/easy-05
    :ARG1 t2)
   :ARG3 (t3/too))))"""

# encoder outputs from the per-direction error analysis
CRUMBS_AMR = """(e / eat-01
 :ARG0 (d / dog
  :location (u / under
   :op1 (t / table)))
 :ARG1 (c / crumb
  :poss (c2 / child))
 :mod (s / still))"""
GO_IN_PEACE_AMR = """(g / go-02
 :mode imperative
 :ARG0 (y / you)
 :manner (p / peace)
 :time (b / before
  :op1 (p2 / person
   :name (n / name
    :op1 "Lord"))))"""
CHERUBIM_AMR = """(a / and
 :op1 (b / be-located-at-91
  :ARG1 (a2 / and
   :op1 (c / cherubim)
   :op2 (t / tree
    :mod (p / palm)))
  :ARG2 (d / door
   :part-of (t2 / temple)))
 :op2 (b2 / be-located-at-91
  :ARG1 (p2 / plank
   :ARG1-of (t3 / thick-03))
  :ARG2 (f / face
   :part-of (p3 / porch))))"""
CONVERTER_AMR = """(r / require-01
 :ARG1 (t / thing
  :ARG0-of (c / convert-01
   :mod (c2 / catalytic)))
 :location (a / and
  :op1 (s / state
   :name (n / name
    :op1 "California"))
  :op2 (s2 / state
   :name (n2 / name
    :op1 "Oregon"))
  :op3 (s3 / state
   :name (n3 / name
    :op1 "Washington"))))"""
CROWN_AMR = """(c / crown-01
 :ARG0 (ii / it)
 :ARG1 (t / tower
  :mod (l / lofty)))"""
GOAT_AMR = """(h / have-org-role-91
 :ARG0 (g / goat
  :ARG1-of (r / rough-04))
 :ARG1 (c / country
  :name (n / name
   :op1 "Greece"))
 :ARG2 (k / king))"""
MISERY_AMR = """(m / misery
 :poss (ii / i)
 :domain (f / fortune
  :poss ii))"""
WONDER_AMR = """(m / make-02
 :ARG0 (ii / it)
 :ARG1 (w / wonder-01
  :ARG0 (y / you)
  :ARG1 (d / differ-02
   :ARG1 (j / jury))))"""
WHISPER_AMR = """(w / whisper-01
 :polarity -
 :ARG0 (p / person
  :name (n / name
   :op1 "Maria"))
 :ARG1 (ii / it))"""
QUOTH_AMR = """(q / quote-01
 :ARG1 (f / fall-01
  :ARG1 (y / you
   :part (f2 / face))
  :ARG4 f2
  :polarity (a / amr-unknown))
 :ARG2 (h / he))"""
WITHER_AMR = """(w / wither-01
 :ARG1 (t / they)
 :location (a / around
  :op1 (g / grave
   :poss (ii / i))))"""
JUSTICE_AMR = """(s / swear-01
 :ARG0 (p / person
  :name (n / name
   :op1 "Justice"))
 :ARG1 (a / and
  :op1 (c / cry-02
   :ARG0 p)
  :op2 (c2 / cry-02
   :ARG0 p)))"""

QUOTED_AMRS = {
    "anwar": ANWAR_AMR,
    "shew_vanilla": SHEW_VANILLA,
    "shew_tuned": SHEW_TUNED,
    "beware_vanilla": BEWARE_VANILLA,
    "beware_tuned": BEWARE_TUNED,
    "crumbs": CRUMBS_AMR,
    "go_in_peace": GO_IN_PEACE_AMR,
    "cherubim": CHERUBIM_AMR,
    "converter": CONVERTER_AMR,
    "crown": CROWN_AMR,
    "goat": GOAT_AMR,
    "misery": MISERY_AMR,
    "wonder": WONDER_AMR,
    "whisper": WHISPER_AMR,
    "quoth": QUOTH_AMR,
    "wither": WITHER_AMR,
    "justice": JUSTICE_AMR,
}

DOG_AMR = "(e / eat-01 :ARG0 (d / dog))"
CAT_AMR = "(e / eat-01 :ARG0 (c / cat))"

_CONCEPTS = ["dog", "cat", "eat-01", "want-01", "boy", "girl", "see-01", "and"]
_ROLES = [":ARG0", ":ARG1", ":ARG2", ":mod", ":op1", ":poss"]


def random_graph(rng: random.Random, n_vars: int, concepts=_CONCEPTS) -> AmrGraph:
    """Connected random graph: a spanning tree (some edges pointing upward), a few extra
    re-entrant edges and attribute edges."""
    vs = [f"v{i}" for i in range(n_vars)]
    inst = {v: rng.choice(concepts) for v in vs}
    edges = []
    for i in range(1, n_vars):
        parent = vs[rng.randrange(i)]
        role = rng.choice(_ROLES)
        if rng.random() < 0.3:
            edges.append(Edge(vs[i], role, Variable(parent)))
        else:
            edges.append(Edge(parent, role, Variable(vs[i])))
    for _ in range(rng.randrange(3)):
        edges.append(Edge(rng.choice(vs), rng.choice(_ROLES), Variable(rng.choice(vs))))
    for _ in range(rng.randrange(3)):
        target = rng.choice([Constant("-"), Constant("5"), Literal("Bob Smith")])
        edges.append(Edge(rng.choice(vs), rng.choice([":polarity", ":quant", ":name"]), target))
    return AmrGraph(vs[0], inst, tuple(edges))


def triple_set(graph: AmrGraph):
    """Order-free, inverse-normalised view of a graph that keeps variable ids."""
    from collections import Counter

    return Counter(extract_triples(graph))


# toy pipeline world ----------------------------------------------------

TOY_LEXICONS = {
    "bible": {"you": "thou", "your": "thy", "has": "hath"},
    "modern": {"you": "u", "your": "ur", "great": "lit"},
}

TOY_GOLD_SENTENCES = [
    "you eat bread",
    "dogs chase cats",
    "you love your dog",
    "the king has a crown",
    "farmers plant wheat",
    "great rivers flow",
]

TOY_MONO = {
    "bible": [
        "thou eat bread",
        "thou love thy brother",
        "the king hath a crown",
        "thou plant wheat",
        "thy dog hath bread",
        "shepherds watch sheep",
        "thou chase thy dog",
        "the king hath wheat",
    ],
    "modern": [
        "u eat bread",
        "u love ur brother",
        "the king is lit",
        "u plant wheat",
        "ur dog eats bread",
        "kids watch phones",
        "u chase ur dog",
        "lit rivers flow",
    ],
}


def toy_world(seed: int = 0):
    """Fresh toy backends, a gold corpus encoded by an untuned toy encoder, and
    mono-style corpora."""
    from tstar.pipeline import GoldAmrCorpus, MonoStyleCorpus, ToyEncoder, toy_backends

    backends = toy_backends(TOY_LEXICONS, seed=seed)
    enc = ToyEncoder()
    gold = GoldAmrCorpus(tuple((s, enc.to_amr(s)) for s in TOY_GOLD_SENTENCES))
    mono = {s: MonoStyleCorpus(s, tuple(xs)) for s, xs in TOY_MONO.items()}
    return backends, gold, mono

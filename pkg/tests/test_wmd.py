import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import (
    ANWAR_AMR,
    ANWAR_AMR_CONTENT,
    ANWAR_AMR_VERBS,
    ANWAR_SENTENCE,
    ANWAR_SENTENCE_CONTENT,
    ANWAR_SENTENCE_VERBS,
    CRUMBS_AMR,
)
from tstar.amr import parse_penman
from tstar.errors import EmbeddingFormatError, EmptyExtractionError
from tstar.tagging import ENTITY, NOUN, VERB, DictTagger, HeuristicTagger
from tstar.wmd import (
    EmbeddingStore,
    ExtractionConfig,
    HashFallback,
    NbowDistribution,
    Skip,
    default_stopwords,
    extract_amr_content,
    extract_amr_verbs,
    extract_sentence_content,
    extract_sentence_verbs,
    hash_vector,
    load_embeddings,
    load_stopwords,
    wmd,
    wmd_overall,
    wmd_verb_overall,
)

# frozen from the scipy LP oracle, 64-dim hash embeddings, seed 0
ANWAR_WMD_VERBS = 1.267840
ANWAR_WMD_OVERALL = 1.130009

STORE = EmbeddingStore.hashed(64, 0)


# extraction ------------------------------------------------------------


def test_anwar_sentence_content():
    assert " ".join(extract_sentence_content(ANWAR_SENTENCE)) == ANWAR_SENTENCE_CONTENT


def test_anwar_amr_content():
    assert " ".join(extract_amr_content(parse_penman(ANWAR_AMR))) == ANWAR_AMR_CONTENT


def test_anwar_sentence_verbs_dict_tagger():
    tagger = DictTagger({"ended": VERB, "left": VERB})
    assert " ".join(extract_sentence_verbs(ANWAR_SENTENCE, tagger)) == ANWAR_SENTENCE_VERBS


def test_anwar_sentence_verbs_heuristic_tagger():
    assert " ".join(extract_sentence_verbs(ANWAR_SENTENCE, HeuristicTagger())) == ANWAR_SENTENCE_VERBS


def test_anwar_amr_verbs():
    assert " ".join(extract_amr_verbs(parse_penman(ANWAR_AMR))) == ANWAR_AMR_VERBS


def test_content_edge_cases():
    assert extract_sentence_content("and the of") == []
    assert extract_sentence_content("dogs bark loudly") == ["dogs", "bark", "loudly"]
    assert extract_amr_content(parse_penman("(s / say-01)")) == ["say"]
    assert extract_amr_content(parse_penman('(p / person :name (n / name :op1 "Anwar"))')) == ["person", "name", "Anwar"]


def test_content_drops_notation_constants():
    g = parse_penman("(g / go-02 :mode imperative :polarity - :quant 3)")
    assert extract_amr_content(g) == ["go", "3"]


def test_punctuation_config():
    cfg = ExtractionConfig(keep_punctuation=False)
    assert extract_sentence_content("well , dogs !", cfg) == ["well", "dogs"]


def test_drop_concepts_configurable():
    g = parse_penman("(d / date-entity :dayperiod (a / afternoon))")
    assert extract_amr_content(g) == ["afternoon"]
    assert extract_amr_content(g, ExtractionConfig(amr_drop_concepts=frozenset())) == ["date-entity", "afternoon"]


def test_verb_edge_cases():
    assert extract_amr_verbs(parse_penman("(z / zero)")) == []
    assert extract_amr_verbs(parse_penman(CRUMBS_AMR)) == ["eat"]
    assert extract_sentence_verbs("the red table", HeuristicTagger()) == []
    assert extract_sentence_verbs("run run run", DictTagger({"run": VERB})) == ["run", "run", "run"]


def test_extraction_deterministic():
    g = parse_penman(ANWAR_AMR)
    assert extract_amr_content(g) == extract_amr_content(parse_penman(ANWAR_AMR))


def test_bundled_stopwords():
    sw = default_stopwords()
    assert len(sw) == 179
    assert {"a", "to", "this", "and", "for"} <= sw
    assert not {"ended", "visit", "left", "minister", "afternoon"} & sw


def test_load_stopwords(tmp_path):
    p = tmp_path / "sw.txt"
    p.write_text("Foo\nbar\n\n")
    assert load_stopwords(p) == frozenset({"foo", "bar"})
    cfg = ExtractionConfig(stopwords=load_stopwords(p))
    assert extract_sentence_content("foo the bar", cfg) == ["the"]


# taggers ---------------------------------------------------------------


def test_heuristic_tagger():
    tags = HeuristicTagger().tag("Then Anwar visited 3 cities , singing".split())
    assert tags == ["X", ENTITY, VERB, "NUM", "X", "X", VERB]


def test_dict_tagger_rejects_unknown_tag():
    with pytest.raises(ValueError):
        DictTagger({"dog": "ANIMAL"})
    assert DictTagger({"Dog": NOUN}).tag(["dog,"]) == [NOUN]


# embeddings ------------------------------------------------------------


def test_hash_vectors():
    v = hash_vector("dog", 16, 3)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    assert np.array_equal(v, hash_vector("dog", 16, 3))
    assert not np.array_equal(v, hash_vector("dog", 16, 4))


def test_store_lookup_policies():
    vecs = {"a": np.array([1.0, 0.0])}
    hashed = EmbeddingStore(2, vecs)
    skip = EmbeddingStore(2, vecs, Skip())
    assert hashed.lookup("zzz") is not None
    assert skip.lookup("zzz") is None
    assert skip.known(["a", "zzz"]) == ["a"]
    with pytest.raises(ValueError):
        EmbeddingStore(3, vecs)


def test_load_embeddings(tmp_path):
    plain = tmp_path / "plain.txt"
    plain.write_text("cat 1 0 0\ndog 0 1 0.5\n")
    header = tmp_path / "header.txt"
    header.write_text("2 3\ncat 1 0 0\ndog 0 1 0.5\n")
    a, b = load_embeddings(plain), load_embeddings(header)
    assert a.dimension == b.dimension == 3
    assert len(a) == len(b) == 2
    assert np.array_equal(a.lookup("dog"), b.lookup("dog"))
    assert isinstance(load_embeddings(plain, Skip()).oov_policy, Skip)
    assert isinstance(a.oov_policy, HashFallback)


@pytest.mark.parametrize(
    "content, line",
    [
        ("cat 1 0 0\ndog 0 1\n", 2),
        ("cat 1 0 0\ndog 0 x 1\n", 2),
        ("cat 1 0 0\ncat 0 1 0\n", 2),
        ("cat\n", 1),
    ],
)
def test_load_embeddings_errors(tmp_path, content, line):
    p = tmp_path / "bad.txt"
    p.write_text(content)
    with pytest.raises(EmbeddingFormatError, match=f"line {line}"):
        load_embeddings(p)


def test_load_embeddings_header_mismatch(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("3 2\ncat 1 0\n")
    with pytest.raises(EmbeddingFormatError):
        load_embeddings(p)


# wmd -------------------------------------------------------------------


def test_nbow_merges_counts():
    d = NbowDistribution.from_tokens(["a", "b", "a", "c"])
    assert d.entries == (("a", 0.5), ("b", 0.25), ("c", 0.25))


def test_wmd_trivial():
    assert wmd(["a", "b"], ["b", "a"], STORE) == 0.0
    dist = np.linalg.norm(STORE.lookup("a") - STORE.lookup("b"))
    assert wmd(["a"], ["b"], STORE) == pytest.approx(dist, abs=1e-12)


def test_wmd_two_by_two_permutation():
    a, b, c, d = (STORE.lookup(t) for t in "abcd")
    pairs = [
        (np.linalg.norm(a - c) + np.linalg.norm(b - d)) / 2,
        (np.linalg.norm(a - d) + np.linalg.norm(b - c)) / 2,
    ]
    assert wmd(["a", "b"], ["c", "d"], STORE) == pytest.approx(min(pairs), abs=1e-12)


def test_wmd_empty_after_oov():
    store = EmbeddingStore(2, {"a": np.array([1.0, 0.0])}, Skip())
    with pytest.raises(EmptyExtractionError):
        wmd(["a"], ["zzz"], store)


def test_wmd_overall_anwar():
    g = parse_penman(ANWAR_AMR)
    assert wmd_overall(ANWAR_SENTENCE, g, STORE) == pytest.approx(ANWAR_WMD_OVERALL, abs=5e-7)
    sc = extract_sentence_content(ANWAR_SENTENCE)
    ac = extract_amr_content(g)
    assert wmd(sc, ac, STORE) == pytest.approx(wmd(ac, sc, STORE), abs=1e-12)


def test_wmd_verb_overall_anwar():
    g = parse_penman(ANWAR_AMR)
    assert wmd_verb_overall(ANWAR_SENTENCE, g, STORE) == pytest.approx(ANWAR_WMD_VERBS, abs=5e-7)


def test_wmd_overall_zero_when_extractions_match():
    g = parse_penman("(e / eat-01 :ARG0 (d / dog))")
    assert wmd_overall("eat dog", g, STORE) == 0.0
    assert wmd_verb_overall("they eat", g, STORE, DictTagger({"eat": VERB})) == 0.0


def test_wmd_verb_overall_verbless():
    with pytest.raises(EmptyExtractionError):
        wmd_verb_overall("the red table", parse_penman("(t / table)"), STORE)
    with pytest.raises(EmptyExtractionError):
        wmd_overall("and the of", parse_penman("(t / table)"), STORE)


tokens = st.lists(st.sampled_from(["cat", "dog", "eat", "run", "big", "red", "sky"]), min_size=1, max_size=5)


@settings(max_examples=150, deadline=None)
@given(tokens, tokens, tokens)
def test_wmd_metric_axioms(a, b, c):
    ab, ba = wmd(a, b, STORE), wmd(b, a, STORE)
    assert wmd(a, a, STORE) == pytest.approx(0.0, abs=1e-9)
    assert abs(ab - ba) <= 1e-9
    assert wmd(a, c, STORE) <= ab + wmd(b, c, STORE) + 1e-9

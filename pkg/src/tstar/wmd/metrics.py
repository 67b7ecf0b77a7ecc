"""Word Mover's Distance and its text-AMR variants."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ..amr import AmrGraph
from ..errors import EmptyExtractionError
from ..tagging import HeuristicTagger, Tagger
from .embeddings import EmbeddingStore
from .extract import (
    DEFAULT_CONFIG,
    ExtractionConfig,
    extract_amr_content,
    extract_amr_verbs,
    extract_sentence_content,
    extract_sentence_verbs,
)
from .transport import TransportPlan, solve_transport


@dataclass(frozen=True)
class NbowDistribution:
    """Normalised bag of words: unique tokens with weights summing to one."""

    entries: tuple

    @classmethod
    def from_tokens(cls, tokens) -> "NbowDistribution":
        counts = Counter(tokens)
        if not counts:
            raise ValueError("cannot build a distribution from no tokens")
        total = sum(counts.values())
        return cls(tuple((t, c / total) for t, c in counts.items()))

    @property
    def tokens(self) -> list[str]:
        return [t for t, _ in self.entries]

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.entries])


def wmd_plan(tokens_a, tokens_b, store: EmbeddingStore) -> tuple[NbowDistribution, NbowDistribution, TransportPlan]:
    known_a = store.known(tokens_a)
    known_b = store.known(tokens_b)
    if not known_a or not known_b:
        side = "first" if not known_a else "second"
        raise EmptyExtractionError(f"{side} token list is empty after out-of-vocabulary filtering")
    da = NbowDistribution.from_tokens(known_a)
    db = NbowDistribution.from_tokens(known_b)
    costs = cdist(store.matrix(da.tokens), store.matrix(db.tokens), metric="euclidean")
    return da, db, solve_transport(da, db, costs)


def wmd(tokens_a, tokens_b, store: EmbeddingStore) -> float:
    """Optimal transport cost between the nBOW distributions of two token lists.

    Ground distance is Euclidean between embeddings.

    Raises
    ------
    EmptyExtractionError
        If either side has no tokens left after OOV handling.
    """
    return wmd_plan(tokens_a, tokens_b, store)[2].cost


def wmd_overall(sentence: str, graph: AmrGraph, store: EmbeddingStore, cfg: ExtractionConfig = DEFAULT_CONFIG) -> float:
    """WMD between a sentence's content tokens and its AMR's content tokens."""
    a = extract_sentence_content(sentence, cfg)
    b = extract_amr_content(graph, cfg)
    if not a or not b:
        raise EmptyExtractionError(("sentence" if not a else "AMR") + " content extraction is empty")
    return wmd(a, b, store)


def wmd_verb_overall(
    sentence: str,
    graph: AmrGraph,
    store: EmbeddingStore,
    tagger: Tagger | None = None,
    cfg: ExtractionConfig = DEFAULT_CONFIG,
) -> float:
    """WMD between the sentence's verbs and the AMR's PropBank frames."""
    a = extract_sentence_verbs(sentence, tagger or HeuristicTagger())
    b = extract_amr_verbs(graph, cfg)
    if not a or not b:
        raise EmptyExtractionError(("sentence" if not a else "AMR") + " verb extraction is empty")
    return wmd(a, b, store)

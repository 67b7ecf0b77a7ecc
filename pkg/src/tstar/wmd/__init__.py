"""Word Mover's Distance between sentences and AMR graphs."""

from .embeddings import EmbeddingStore, HashFallback, OovPolicy, Skip, hash_vector, load_embeddings
from .extract import (
    DEFAULT_CONFIG,
    ExtractionConfig,
    default_stopwords,
    extract_amr_content,
    extract_amr_verbs,
    extract_sentence_content,
    extract_sentence_verbs,
    load_stopwords,
)
from .metrics import NbowDistribution, wmd, wmd_overall, wmd_plan, wmd_verb_overall
from .transport import TransportPlan, solve_transport

__all__ = [
    "DEFAULT_CONFIG",
    "EmbeddingStore",
    "ExtractionConfig",
    "HashFallback",
    "NbowDistribution",
    "OovPolicy",
    "Skip",
    "TransportPlan",
    "default_stopwords",
    "extract_amr_content",
    "extract_amr_verbs",
    "extract_sentence_content",
    "extract_sentence_verbs",
    "hash_vector",
    "load_embeddings",
    "load_stopwords",
    "solve_transport",
    "wmd",
    "wmd_overall",
    "wmd_plan",
    "wmd_verb_overall",
]

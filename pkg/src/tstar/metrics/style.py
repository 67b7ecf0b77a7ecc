"""Style classification seam, similarity, and the style-transfer rates."""

from __future__ import annotations

import string
from collections import Counter
from typing import Callable, Iterable, Mapping, Protocol, Sequence

import numpy as np

from ..amr.linearize import is_pointer, is_role
from ..errors import EmptyExtractionError, UnknownStyleError
from ..tagging import ENTITY, NOUN, NUM, Tagger
from ..wmd.embeddings import EmbeddingStore
from ..wmd.extract import DEFAULT_CONFIG, ExtractionConfig, extract_sentence_content


class StyleScorer(Protocol):
    styles: tuple

    def classify(self, sentence: str) -> tuple[str, float]: ...


SimilarityFn = Callable[[str, str], float]


def _norm(token: str) -> str:
    return token.strip(string.punctuation).lower()


class LexiconStyleScorer:
    """Counts marker hits per style; the style with most hits wins.

    Ties (including no hits at all) go to the earliest style in ``styles``.
    Confidence is the winner's share of all hits, 0 when nothing matched.
    """

    def __init__(self, lexicons: Mapping[str, Iterable[str]], styles: Sequence[str] | None = None):
        if not lexicons:
            raise ValueError("at least one style is required")
        self.styles = tuple(styles) if styles is not None else tuple(lexicons)
        if set(self.styles) != set(lexicons):
            raise ValueError("style order must list exactly the lexicon styles")
        self.markers = {s: frozenset(_norm(m) for m in lexicons[s]) for s in self.styles}
        seen: dict[str, str] = {}
        for s in self.styles:
            for m in self.markers[s]:
                if m in seen:
                    raise ValueError(f"marker {m!r} is shared by styles {seen[m]!r} and {s!r}")
                seen[m] = s
        self._owner = seen

    def classify(self, sentence: str) -> tuple[str, float]:
        hits = Counter(self._owner[t] for t in map(_norm, sentence.split()) if t in self._owner)
        total = sum(hits.values())
        if total == 0:
            return self.styles[0], 0.0
        best = max(self.styles, key=lambda s: (hits[s], -self.styles.index(s)))
        return best, hits[best] / total


def lexicon_style_scorer(lexicons: Mapping[str, Iterable[str]], styles=None) -> LexiconStyleScorer:
    return LexiconStyleScorer(lexicons, styles)


def fit_lexicon_scorer(examples: Iterable[tuple[Sequence[str], str]], styles: Sequence[str], ignore=("<MASK>",)) -> LexiconStyleScorer:
    """Fit a lexicon scorer whose markers are tokens seen under exactly one style."""
    owners: dict[str, set] = {}
    for tokens, style in examples:
        for t in tokens:
            if t in ignore:
                continue
            t = _norm(t)
            if t:
                owners.setdefault(t, set()).add(style)
    lex = {s: set() for s in styles}
    for t, ss in owners.items():
        if len(ss) == 1:
            lex[next(iter(ss))].add(t)
    return LexiconStyleScorer(lex, styles)


def read_lexicon_file(path) -> dict[str, set]:
    """``style<TAB>marker marker ...`` per line; repeated styles accumulate."""
    lex: dict[str, set] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            style, _, rest = line.partition("\t")
            if not rest and " " in style:
                style, _, rest = style.partition(" ")
            lex.setdefault(style.strip(), set()).update(rest.split())
    if not lex:
        raise ValueError(f"{path}: no styles defined")
    return lex


def _label(scorer: StyleScorer, sentence: str) -> str:
    label, _ = scorer.classify(sentence)
    if label not in scorer.styles:
        raise UnknownStyleError(f"scorer returned unknown style {label!r}")
    return label


def style_accuracy(instances, scorer: StyleScorer) -> float:
    """Fraction of targets classified as their target style."""
    instances = list(instances)
    if not instances:
        raise ValueError("no instances")
    return sum(_label(scorer, x.target) == x.target_style for x in instances) / len(instances)


def style_retention(instances, scorer: StyleScorer) -> float:
    """Fraction of targets still classified as their source style."""
    instances = list(instances)
    if not instances:
        raise ValueError("no instances")
    return sum(_label(scorer, x.target) == x.source_style for x in instances) / len(instances)


def weighted_style_accuracy(instances, scorer: StyleScorer, sim_fn: SimilarityFn) -> float:
    """Mean of sim(source, target) over style-correct targets, 0 for the rest.

    The denominator is every instance, not only the correct ones.
    """
    instances = list(instances)
    if not instances:
        raise ValueError("no instances")
    total = 0.0
    for x in instances:
        if _label(scorer, x.target) == x.target_style:
            total += sim_fn(x.source, x.target)
    return total / len(instances)


class EmbeddingSimilarity:
    """Cosine of mean content-token embeddings, mapped from [-1, 1] onto [0, 1]."""

    name = "mean-embedding-cosine"

    def __init__(self, store: EmbeddingStore, cfg: ExtractionConfig = DEFAULT_CONFIG):
        self.store = store
        self.cfg = cfg

    def _content(self, sentence):
        toks = self.store.known(extract_sentence_content(sentence, self.cfg))
        if not toks:
            raise EmptyExtractionError(f"no content tokens in {sentence!r}")
        return toks

    def __call__(self, a: str, b: str) -> float:
        ta, tb = self._content(a), self._content(b)
        if Counter(ta) == Counter(tb):
            return 1.0
        va = self.store.matrix(ta).mean(axis=0)
        vb = self.store.matrix(tb).mean(axis=0)
        na, nb = np.linalg.norm(va), np.linalg.norm(vb)
        if na == 0 or nb == 0:
            return 0.5
        cos = float(va @ vb / (na * nb))
        return min(1.0, max(0.0, (cos + 1) / 2))


def embedding_sim(source: str, target: str, store: EmbeddingStore, cfg: ExtractionConfig = DEFAULT_CONFIG) -> float:
    return EmbeddingSimilarity(store, cfg)(source, target)


_MASKED_TAGS = frozenset({ENTITY, NUM, NOUN})


def mask_for_style_probe(tokens: Sequence[str], tagger: Tagger, cfg: ExtractionConfig = DEFAULT_CONFIG, amr: bool = False) -> list[str]:
    """Replace content-bearing tokens by ``cfg.mask_token``.

    Entities, numbers and common nouns are masked. For AMR-derived
    sequences (``amr=True``) role and pointer tokens are masked as well when
    ``cfg.mask_amr_structure`` is set; brackets stay.
    """
    tokens = list(tokens)
    tags = tagger.tag(tokens)
    out = []
    for tok, tag in zip(tokens, tags):
        structural = amr and cfg.mask_amr_structure and (is_role(tok) or is_pointer(tok))
        out.append(cfg.mask_token if structural or tag in _MASKED_TAGS else tok)
    return out

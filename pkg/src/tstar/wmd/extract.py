"""Content and verb extraction from sentences and AMR graphs.

These produce the token lists that the text-AMR WMD variants compare. The
sentence side lowercases, splits on whitespace and drops stopwords; the
AMR side reads concepts in depth-first order with notation removed.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..amr import AmrGraph, Constant, Literal, Node, strip_sense, traverse, walk
from ..tagging import VERB, Tagger

STOPWORDS_VERSION = "en-179"


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset:
    """The bundled English stopword list (179 entries)."""
    text = resources.files("tstar.wmd").joinpath("data/stopwords_en.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def load_stopwords(path) -> frozenset:
    text = Path(path).read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


DEFAULT_DROP_CONCEPTS = frozenset({"date-entity", "multi-sentence", "amr-unknown"})


@dataclass(frozen=True)
class ExtractionConfig:
    stopwords: frozenset = field(default_factory=default_stopwords)
    keep_punctuation: bool = True
    amr_drop_concepts: frozenset = DEFAULT_DROP_CONCEPTS
    mask_token: str = "<MASK>"
    # mask role and pointer tokens when the probe input is an AMR sequence
    mask_amr_structure: bool = True


DEFAULT_CONFIG = ExtractionConfig()

_FRAME_RE = re.compile(r".+-\d{2}\Z")
_REIFICATION_RE = re.compile(r"have-.+-91\Z")
_NUMERIC_RE = re.compile(r"[+-]?\d+(?:\.\d+)?\Z")


def _is_punctuation(token: str) -> bool:
    return all(ch in string.punctuation for ch in token)


def extract_sentence_content(sentence: str, cfg: ExtractionConfig = DEFAULT_CONFIG) -> list[str]:
    out = []
    for tok in sentence.lower().split():
        if tok in cfg.stopwords:
            continue
        if not cfg.keep_punctuation and _is_punctuation(tok):
            continue
        out.append(tok)
    return out


def extract_amr_content(graph: AmrGraph, cfg: ExtractionConfig = DEFAULT_CONFIG) -> list[str]:
    """Concepts (sense-stripped) and literal operands in depth-first order.

    Roles, brackets, variable ids and re-entrancies vanish. Literals are
    emitted without quotes and numeric constants are kept; other constants
    (``-``, ``imperative``, ...) are notation and are dropped. Concepts in
    ``cfg.amr_drop_concepts`` are skipped but their children are not.
    """
    out = []
    for _, item in walk(traverse(graph)):
        if isinstance(item, Node):
            if item.concept not in cfg.amr_drop_concepts:
                out.append(strip_sense(item.concept))
        elif isinstance(item, Literal):
            out.append(item.value)
        elif isinstance(item, Constant) and _NUMERIC_RE.match(item.value):
            out.append(item.value)
    return out


def extract_sentence_verbs(sentence: str, tagger: Tagger) -> list[str]:
    """Surface forms of tokens the tagger marks as verbs, in order."""
    tokens = sentence.split()
    tags = tagger.tag(tokens)
    if len(tags) != len(tokens):
        raise ValueError("tagger returned a tag list of the wrong length")
    return [t for t, tag in zip(tokens, tags) if tag == VERB]


def extract_amr_verbs(graph: AmrGraph, cfg: ExtractionConfig = DEFAULT_CONFIG) -> list[str]:
    """Sense-stripped PropBank frames in depth-first order.

    ``have-*-91`` reification frames and concepts in ``cfg.amr_drop_concepts``
    are not verbs for this purpose.
    """
    out = []
    for _, item in walk(traverse(graph)):
        if not isinstance(item, Node):
            continue
        c = item.concept
        if c in cfg.amr_drop_concepts or not _FRAME_RE.match(c) or _REIFICATION_RE.match(c):
            continue
        out.append(strip_sense(c))
    return out

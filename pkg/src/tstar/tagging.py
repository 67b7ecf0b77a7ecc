"""Coarse part-of-speech tagging seam.

Taggers map a token list to one tag per token from a small tag set. Only
the distinctions the metrics need are kept: verbs, common nouns, named
entities and numbers. Anything backed by a real tagger (spaCy, NLTK) can be
adapted by implementing :meth:`Tagger.tag`.
"""

from __future__ import annotations

import re
import string
from typing import Mapping, Protocol, Sequence

VERB = "VERB"
NOUN = "NOUN"
ENTITY = "ENTITY"
NUM = "NUM"
OTHER = "X"
TAGS = frozenset({VERB, NOUN, ENTITY, NUM, OTHER})


class Tagger(Protocol):
    def tag(self, tokens: Sequence[str]) -> list[str]: ...


def _core(token: str) -> str:
    return token.strip(string.punctuation).lower()


class DictTagger:
    """Tags from an explicit token -> tag table (case-insensitive, punctuation-stripped)."""

    def __init__(self, table: Mapping[str, str], default: str = OTHER):
        bad = {t for t in list(table.values()) + [default] if t not in TAGS}
        if bad:
            raise ValueError(f"unknown tags: {sorted(bad)}")
        self.table = {_core(k): v for k, v in table.items()}
        self.default = default

    def tag(self, tokens):
        return [self.table.get(_core(t), self.default) for t in tokens]


_IRREGULAR_VERBS = frozenset(
    """
    ate ate began begun bit blew blown bore bought brought built burnt came caught chose chosen
    clung crept dealt did done drank drawn drew driven drove drunk dug eaten fed felt fell fallen
    fled flew flown forgot forgotten fought found froze frozen gave given gone got gotten grew
    grown had heard held hid hidden hit hung kept knew known laid led left lent lost made meant
    met paid put quit ran rang read rode rose said sang sat saw seen sent shook shone shot shown
    shut slept slid sold sought spent spoke spoken spun stole stolen stood struck stuck stung
    sung swam swept swore swum swung taken taught thought threw thrown told took tore torn understood
    was went were woke won wore worn wrote written
    """.split()
)

# Words with verb-like suffixes that are rarely verbs.
_SUFFIX_EXCEPTIONS = frozenset(
    """
    bed bleed breed creed deed exceed feed fled greed hundred indeed need proceed red seed shed
    sled speed steed succeed weed wed naked sacred wicked beloved kindred
    anything bring ceiling clothing during evening everything king morning nothing
    pudding ring sibling sing something spring sting string swing thing wing wedding building
    """.split()
)

_NUMBER_RE = re.compile(r"[+-]?\d+(?:[.,]\d+)*\Z")


class HeuristicTagger:
    """Dependency-free rule tagger.

    Verbs are recognised from a list of irregular past forms and from
    ``-ed`` / ``-ing`` suffixes (with an exception list); numbers by shape;
    capitalised tokens that do not start the sentence as entities. There is
    no common-noun detection, so supply a :class:`DictTagger` or a real
    tagger where nouns matter.
    """

    def tag(self, tokens):
        tags = []
        for k, tok in enumerate(tokens):
            core = _core(tok)
            bare = tok.strip(string.punctuation)
            if not core:
                tags.append(OTHER)
            elif _NUMBER_RE.match(core):
                tags.append(NUM)
            elif core in _IRREGULAR_VERBS:
                tags.append(VERB)
            elif core not in _SUFFIX_EXCEPTIONS and (
                (core.endswith("ed") and len(core) >= 5) or (core.endswith("ing") and len(core) >= 6)
            ):
                tags.append(VERB)
            elif k > 0 and bare[:1].isupper():
                tags.append(ENTITY)
            else:
                tags.append(OTHER)
        return tags

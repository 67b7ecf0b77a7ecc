"""Deterministic rule-based backends.

These stand in for the fine-tuned seq2seq models so the iterative loop can
run and be audited without any training. ``fine_tune`` is lexicon
extension from aligned pairs, not learning in any real sense.
"""

from __future__ import annotations

import hashlib
import re
import string
from collections import Counter
from typing import Mapping, Sequence

from ..amr import AmrGraph, Constant, Edge, Literal, Node, Variable, strip_sense, traverse
from ..errors import BackendError
from ..wmd.extract import DEFAULT_DROP_CONCEPTS, default_stopwords
from .interfaces import Backends

_BASE_VERBS = """
    accept add agree allow answer arrive ask believe call change clean climb close cook cry dance
    decide eat end enjoy enter explain fall fear finish follow give hate help hope jump kill kiss
    know laugh learn leave like listen live look love make move need open order pass play please
    pray receive remember return run save say see seem serve share show sing sit sleep smile speak
    start stay stop study take talk teach tell thank think travel try turn use visit wait walk want
    watch win wish work worry write
""".split()

_IRREGULAR = {
    "ate": "eat", "eaten": "eat", "fell": "fall", "fallen": "fall", "gave": "give", "given": "give",
    "knew": "know", "known": "know", "left": "leave", "made": "make", "ran": "run", "said": "say",
    "saw": "see", "seen": "see", "sat": "sit", "slept": "sleep", "spoke": "speak", "spoken": "speak",
    "took": "take", "taken": "take", "talked": "talk", "taught": "teach", "told": "tell",
    "thought": "think", "won": "win", "wrote": "write", "written": "write", "sang": "sing",
    "sung": "sing", "went": "go", "gone": "go", "goes": "go", "going": "go", "go": "go",
    "came": "come", "come": "come", "comes": "come", "coming": "come", "fought": "fight",
    "fight": "fight", "fights": "fight", "brought": "bring", "bring": "bring", "brings": "bring",
}


def _inflections(base: str) -> list[str]:
    stem = base[:-1] if base.endswith("e") else base
    third = base + "es" if base.endswith(("s", "sh", "ch", "x", "o")) else base + "s"
    if base.endswith("y") and base[-2:-1] not in "aeiou":
        third, past = base[:-1] + "ies", base[:-1] + "ied"
    else:
        past = base + "d" if base.endswith("e") else base + "ed"
    return [base, third, past, stem + "ing"]


def default_verb_table() -> dict[str, str]:
    """Surface form -> lemma for a small set of common verbs."""
    table = {}
    for base in _BASE_VERBS:
        for form in _inflections(base):
            table.setdefault(form, base)
    table.update(_IRREGULAR)
    return table


# AMR keeps pronouns as concepts, so the encoder only drops the other stopwords
PRONOUNS = frozenset(
    """
    i me my mine myself we us our ours ourselves you your yours yourself yourselves he him his
    himself she her hers herself it its itself they them their theirs themselves
    """.split()
)


def function_words() -> frozenset:
    return default_stopwords() - PRONOUNS


_UNSAFE = re.compile(r'[()"/:\s]')


def _norm(token: str) -> str:
    return _UNSAFE.sub("-", token.strip(string.punctuation).lower())


def _tiebreak(seed: int, *parts: str) -> str:
    return hashlib.sha256("\x00".join([str(seed), *parts]).encode("utf-8")).hexdigest()


def _vote(votes: Mapping[str, Counter], seed: int) -> dict[str, str]:
    """Majority winner per key; ties go to the smallest seeded hash."""
    out = {}
    for key in sorted(votes):
        counts = votes[key]
        best = max(counts.values())
        tied = sorted(c for c, n in counts.items() if n == best)
        out[key] = min(tied, key=lambda c: _tiebreak(seed, key, c))
    return out


def readout(graph: AmrGraph, drop=DEFAULT_DROP_CONCEPTS) -> list[str]:
    """Concept tokens in surface order.

    A node's children up to and including its ``:ARG0`` come before the
    node's own (sense-stripped) concept, the remaining children after it.
    Re-entrancies are not repeated; literals are read as their value.
    """
    out: list[str] = []
    stack: list = [traverse(graph)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        if isinstance(item, Literal):
            out.append(item.value)
            continue
        if not isinstance(item, Node):
            continue
        roles = [r for r, _ in item.children]
        split = roles.index(":ARG0") + 1 if ":ARG0" in roles else 0
        seq = [c for _, c in item.children[:split]]
        if item.concept not in drop:
            seq.append(strip_sense(item.concept))
        seq += [c for _, c in item.children[split:]]
        stack.extend(reversed(seq))
    return out


class ToyEncoder:
    """Sentence -> AMR by template.

    Content tokens (lowercased, punctuation-stripped, function words removed, then
    canonicalised through the learned map) are laid out around the first
    token found in the verb table, which becomes the root ``<lemma>-01``.
    The nearest token before it is ``:ARG0``, the nearest after it ``:ARG1``
    and everything else hangs off the root as ``:mod``, in sentence order.
    Without a verb the first token is the root.
    """

    def __init__(self, verbs: Mapping[str, str] | None = None, stopwords=None, seed: int = 0):
        self.verbs = dict(default_verb_table() if verbs is None else verbs)
        self.stopwords = frozenset(function_words() if stopwords is None else stopwords)
        self.seed = seed
        self.canon: dict[str, str] = {}
        self._votes: dict[str, Counter] = {}

    def content(self, sentence: str) -> list[str]:
        toks = [_norm(t) for t in sentence.split()]
        return [t for t in toks if t and t not in self.stopwords]

    def to_amr(self, sentence: str) -> AmrGraph:
        toks = [self.canon.get(t, t) for t in self.content(sentence)]
        if not toks:
            raise BackendError(f"nothing to encode in {sentence!r}")
        vi = next((i for i, t in enumerate(toks) if t in self.verbs), None)
        if vi is None:
            root_concept, vi = toks[0], 0
            roles = [":mod"] * len(toks)
        else:
            root_concept = self.verbs[toks[vi]] + "-01"
            roles = [":mod"] * len(toks)
            if vi > 0:
                roles[vi - 1] = ":ARG0"
            if vi + 1 < len(toks):
                roles[vi + 1] = ":ARG1"
        taken: set[str] = set()
        root = _fresh(root_concept, taken)
        instances = {root: root_concept}
        edges = []
        for i, t in enumerate(toks):
            if i == vi:
                continue
            v = _fresh(t, taken)
            instances[v] = t
            edges.append(Edge(root, roles[i], Variable(v)))
        return AmrGraph(root, instances, tuple(edges))

    def fine_tune(self, pairs: Sequence[tuple[str, AmrGraph]]) -> None:
        for sentence, graph in pairs:
            surface = self.content(sentence)
            generic = readout(graph)
            if len(surface) != len(generic):
                continue
            for s, g in zip(surface, generic):
                if s != g:
                    self._votes.setdefault(s, Counter())[g] += 1
        self.canon = _vote(self._votes, self.seed)

    def state_dict(self) -> dict:
        return {"votes": {k: dict(sorted(v.items())) for k, v in sorted(self._votes.items())}}

    def load_state_dict(self, state: dict) -> None:
        self._votes = {k: Counter(v) for k, v in state.get("votes", {}).items()}
        self.canon = _vote(self._votes, self.seed)


def _fresh(concept: str, taken: set[str]) -> str:
    head = concept[0] if "a" <= concept[0] <= "z" else "x"
    var, n = head, 2
    while var in taken:
        var, n = f"{head}{n}", n + 1
    taken.add(var)
    return var


class ToyDecoder:
    """AMR -> text for one style: :func:`readout` plus lexicon substitution."""

    def __init__(self, style: str, lexicon: Mapping[str, str] | None = None, stopwords=None, seed: int = 0):
        self.style = style
        self.base = dict(lexicon or {})
        self.stopwords = frozenset(function_words() if stopwords is None else stopwords)
        self.seed = seed
        self.learned: dict[str, str] = {}
        self._votes: dict[str, Counter] = {}

    @property
    def lexicon(self) -> dict[str, str]:
        return {**self.learned, **self.base}

    def to_text(self, graph: AmrGraph) -> str:
        lex = self.lexicon
        return " ".join(lex.get(t, t) for t in readout(graph))

    def fine_tune(self, pairs: Sequence[tuple[str, AmrGraph]]) -> None:
        for sentence, graph in pairs:
            surface = [t for t in (_norm(w) for w in sentence.split()) if t and t not in self.stopwords]
            generic = readout(graph)
            if len(surface) != len(generic):
                continue
            for g, s in zip(generic, surface):
                if g != s:
                    self._votes.setdefault(g, Counter())[s] += 1
        self.learned = _vote(self._votes, self.seed)

    def state_dict(self) -> dict:
        return {"votes": {k: dict(sorted(v.items())) for k, v in sorted(self._votes.items())}}

    def load_state_dict(self, state: dict) -> None:
        self._votes = {k: Counter(v) for k, v in state.get("votes", {}).items()}
        self.learned = _vote(self._votes, self.seed)


class ToyStyler:
    """Word-for-word lexicon substitution on raw text.

    Matching is on the lowercased, punctuation-stripped token; surrounding
    punctuation is kept.
    """

    def __init__(self, lexicons: Mapping[str, Mapping[str, str]]):
        self.lexicons = {s: {k.lower(): v for k, v in lex.items()} for s, lex in lexicons.items()}

    def stylize(self, sentence: str, style: str) -> str:
        if style not in self.lexicons:
            raise BackendError(f"no lexicon for style {style!r}")
        lex = self.lexicons[style]
        out = []
        for tok in sentence.split():
            core = tok.strip(string.punctuation)
            key = core.lower()
            if core and key in lex:
                start = tok.index(core)
                tok = tok[:start] + lex[key] + tok[start + len(core):]
            out.append(tok)
        return " ".join(out)


def toy_backends(lexicons: Mapping[str, Mapping[str, str]], seed: int = 0, verbs: Mapping[str, str] | None = None) -> Backends:
    """Encoder, one decoder per style and a styler from ``style -> {lemma: surface}`` lexicons.

    A style's own lexicon may be empty (its decoder is then the plain
    readout) but the mapping itself must name at least one style.
    """
    if not lexicons:
        raise ValueError("toy backends need at least one style lexicon")
    encoder = ToyEncoder(verbs, seed=seed)
    decoders = {s: ToyDecoder(s, lex, seed=seed) for s, lex in lexicons.items()}
    return Backends(encoder, decoders, ToyStyler(lexicons))

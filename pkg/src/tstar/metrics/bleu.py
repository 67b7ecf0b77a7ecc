"""Sentence-level BLEU-4 between a source and its rewrite (self-BLEU)."""

from __future__ import annotations

import math
from collections import Counter

EPSILON = 1e-9
MAX_ORDER = 4


def _ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def modified_precisions(reference, hypothesis, max_order: int = MAX_ORDER):
    """(clipped matches, hypothesis n-gram count) for each order 1..max_order."""
    out = []
    for n in range(1, max_order + 1):
        hyp = _ngrams(hypothesis, n)
        ref = _ngrams(reference, n)
        matched = sum(min(c, ref[g]) for g, c in hyp.items())
        out.append((matched, sum(hyp.values())))
    return out


def self_bleu(source: str, target: str, max_order: int = MAX_ORDER, epsilon: float = EPSILON) -> float:
    """BLEU of ``target`` against ``source`` as the single reference.

    Whitespace tokenization, case-sensitive, uniform weights over orders
    1..4 and the standard brevity penalty. A zero match count at some
    order is replaced by ``epsilon``. Orders with no hypothesis n-grams at
    all (target shorter than n) are left out and the weights renormalised,
    so a sentence compared with itself scores 1 at any length.

    Returns 0 for an empty target.
    """
    ref = source.split()
    hyp = target.split()
    if not hyp:
        return 0.0
    logs = []
    for matched, total in modified_precisions(ref, hyp, max_order):
        if total == 0:
            continue
        logs.append(math.log(max(matched, epsilon) / total))
    bp = 1.0 if len(hyp) > len(ref) else math.exp(1 - len(ref) / len(hyp)) if ref else 0.0
    if bp == 0.0:
        return 0.0
    return bp * math.exp(sum(logs) / len(logs))

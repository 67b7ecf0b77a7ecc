"""SMATCH: triple overlap between two AMR graphs under the best variable mapping.

Both graphs contribute one TOP triple ``(root, TOP, root-concept)``. Concepts
are compared as exact, case-sensitive strings; sense suffixes are kept.

Three entry points share the same scoring:

* :func:`triple_match_count` counts matches for a given mapping, directly
  from the triple sets;
* :func:`smatch_exact` searches all injective mappings (branch and bound);
* :func:`smatch_hill_climb` is the usual restarted local search.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .amr import AmrGraph, TripleKind, extract_triples
from .errors import SmatchSizeError

EXACT_SIZE_BOUND = 8
DEFAULT_RESTARTS = 4


@dataclass(frozen=True)
class SmatchScore:
    matches: int
    precision: float
    recall: float
    f: float
    mapping: Mapping[str, str] = field(default_factory=dict)
    triples_test: int = 0  # |triples(g1)|, the precision denominator
    triples_gold: int = 0  # |triples(g2)|, the recall denominator

    def format(self) -> str:
        return f"Precision: {self.precision:.4f}  Recall: {self.recall:.4f}  F-score: {self.f:.4f}"


def _score(matches, n1, n2, mapping) -> SmatchScore:
    p = matches / n1 if n1 else 0.0
    r = matches / n2 if n2 else 0.0
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return SmatchScore(matches, p, r, f, dict(mapping), n1, n2)


def _check_mapping(g1, g2, mapping):
    targets = list(mapping.values())
    if len(set(targets)) != len(targets):
        raise ValueError("mapping is not injective")
    for a, b in mapping.items():
        if a not in g1.instances:
            raise ValueError(f"{a!r} is not a variable of the first graph")
        if b not in g2.instances:
            raise ValueError(f"{b!r} is not a variable of the second graph")


def triple_match_count(g1: AmrGraph, g2: AmrGraph, mapping: Mapping[str, str]) -> int:
    """Number of triples of ``g1`` that ``mapping`` carries onto triples of ``g2``."""
    _check_mapping(g1, g2, mapping)
    t2 = set(extract_triples(g2, include_top=True))
    count = 0
    for kind, subj, role, obj in extract_triples(g1, include_top=True):
        if subj not in mapping:
            continue
        if kind is TripleKind.RELATION:
            if obj in mapping and (kind, mapping[subj], role, mapping[obj]) in t2:
                count += 1
        elif (kind, mapping[subj], role, obj) in t2:
            count += 1
    return count


class _Problem:
    """Index-based view of a graph pair used by both searches.

    ``unary[i, j]`` counts the instance, attribute and TOP matches gained by
    mapping variable ``i`` of g1 to variable ``j`` of g2. Relation triples
    are kept as ``(i, role, k)`` and matched against a set for g2.
    """

    def __init__(self, g1: AmrGraph, g2: AmrGraph):
        self.vars1 = list(g1.instances)
        self.vars2 = list(g2.instances)
        idx1 = {v: i for i, v in enumerate(self.vars1)}
        idx2 = {v: j for j, v in enumerate(self.vars2)}
        t1 = extract_triples(g1, include_top=True)
        t2 = extract_triples(g2, include_top=True)
        self.n_triples1 = len(t1)
        self.n_triples2 = len(t2)

        unary_keys2: dict[int, set] = {j: set() for j in range(len(self.vars2))}
        self.rel2 = set()
        for kind, subj, role, obj in t2:
            if kind is TripleKind.RELATION:
                self.rel2.add((idx2[subj], role, idx2[obj]))
            else:
                unary_keys2[idx2[subj]].add((kind, role, obj))

        self.unary = np.zeros((len(self.vars1), len(self.vars2)), dtype=np.int64)
        unary_keys1: dict[int, list] = {i: [] for i in range(len(self.vars1))}
        self.rel1 = []
        for kind, subj, role, obj in t1:
            if kind is TripleKind.RELATION:
                self.rel1.append((idx1[subj], role, idx1[obj]))
            else:
                unary_keys1[idx1[subj]].append((kind, role, obj))
        for i, keys in unary_keys1.items():
            for j, other in unary_keys2.items():
                self.unary[i, j] = sum(1 for key in keys if key in other)

        self.incident: list[list[int]] = [[] for _ in self.vars1]
        for r, (a, _, b) in enumerate(self.rel1):
            self.incident[a].append(r)
            if b != a:
                self.incident[b].append(r)

    def rel_hit(self, r, m) -> int:
        a, role, b = self.rel1[r]
        ma, mb = m[a], m[b]
        return int(ma >= 0 and mb >= 0 and (ma, role, mb) in self.rel2)

    def total(self, m) -> int:
        s = sum(int(self.unary[i, j]) for i, j in enumerate(m) if j >= 0)
        return s + sum(self.rel_hit(r, m) for r in range(len(self.rel1)))

    def local(self, m, changed) -> int:
        """Score of the triples touching any variable in ``changed``."""
        s = sum(int(self.unary[i, m[i]]) for i in changed if m[i] >= 0)
        rels = set()
        for i in changed:
            rels.update(self.incident[i])
        return s + sum(self.rel_hit(r, m) for r in rels)

    def mapping_dict(self, m) -> dict[str, str]:
        return {self.vars1[i]: self.vars2[j] for i, j in enumerate(m) if j >= 0}


def smatch_exact(g1: AmrGraph, g2: AmrGraph, size_bound: int = EXACT_SIZE_BOUND) -> SmatchScore:
    """Globally optimal SMATCH by exhaustive search over injective mappings.

    Matches never decrease when a pair is added to a mapping, so only
    mappings covering the smaller graph completely are enumerated. The match
    count of a mapping equals that of its inverse, so the search always runs
    from the smaller side. Branches are pruned with an admissible bound; the
    first optimum in enumeration order is returned.

    Raises
    ------
    SmatchSizeError
        If both graphs have more than ``size_bound`` variables.
    """
    n1, n2 = len(g1.instances), len(g2.instances)
    if min(n1, n2) > size_bound:
        raise SmatchSizeError(f"exhaustive SMATCH limited to {size_bound} variables on the smaller side")
    flip = n2 < n1
    prob = _Problem(g2, g1) if flip else _Problem(g1, g2)
    nd, nr = len(prob.vars1), len(prob.vars2)

    max_unary = prob.unary.max(axis=1) if nr else np.zeros(nd, dtype=np.int64)
    suffix_unary = [int(x) for x in np.concatenate([np.cumsum(max_unary[::-1])[::-1], [0]])]
    last = [max(a, b) for a, _, b in prob.rel1]
    open_rels = [sum(1 for x in last if x >= d) for d in range(nd + 1)]

    m = [-1] * nd
    used = [False] * nr
    best = [-1, list(m)]

    def dfs(d):
        partial = prob.total(m)
        if d == nd:
            if partial > best[0]:
                best[0], best[1] = partial, list(m)
            return
        if partial + suffix_unary[d] + open_rels[d] <= best[0]:
            return
        for r in range(nr):
            if not used[r]:
                used[r] = True
                m[d] = r
                dfs(d + 1)
                m[d] = -1
                used[r] = False

    dfs(0)
    mapping = prob.mapping_dict(best[1])
    if flip:
        mapping = {b: a for a, b in mapping.items()}
    n_t1, n_t2 = (prob.n_triples2, prob.n_triples1) if flip else (prob.n_triples1, prob.n_triples2)
    return _score(best[0], n_t1, n_t2, mapping)


def _greedy_start(prob: _Problem) -> list[int]:
    m = [-1] * len(prob.vars1)
    used = set()
    for i in range(len(prob.vars1)):
        best_j, best_w = -1, 0
        for j in range(len(prob.vars2)):
            if j in used:
                continue
            w = int(prob.unary[i, j])
            if w > best_w:
                best_j, best_w = j, w
        if best_j >= 0:
            m[i] = best_j
            used.add(best_j)
    return m


def _random_start(prob: _Problem, rng: random.Random) -> list[int]:
    targets = list(range(len(prob.vars2)))
    rng.shuffle(targets)
    m = [-1] * len(prob.vars1)
    order = list(range(len(prob.vars1)))
    rng.shuffle(order)
    for i, j in zip(order, targets):
        m[i] = j
    return m


def _climb(prob: _Problem, m: list[int]) -> tuple[int, list[int]]:
    """Steepest ascent over single reassignments and swaps.

    Ties go to the first move found: variables in order, reassignments
    before swaps.
    """
    n1, n2 = len(prob.vars1), len(prob.vars2)
    score = prob.total(m)
    while True:
        used = set(j for j in m if j >= 0)
        best_gain, best_move = 0, None
        for i in range(n1):
            before = prob.local(m, (i,))
            old = m[i]
            for j in range(n2):
                if j in used:
                    continue
                m[i] = j
                gain = prob.local(m, (i,)) - before
                if gain > best_gain:
                    best_gain, best_move = gain, ("move", i, j)
            m[i] = old
            for k in range(i + 1, n1):
                if m[i] == m[k]:  # both unmapped
                    continue
                before_pair = prob.local(m, (i, k))
                m[i], m[k] = m[k], m[i]
                gain = prob.local(m, (i, k)) - before_pair
                m[i], m[k] = m[k], m[i]
                if gain > best_gain:
                    best_gain, best_move = gain, ("swap", i, k)
        if best_move is None:
            return score, m
        kind, a, b = best_move
        if kind == "move":
            m[a] = b
        else:
            m[a], m[b] = m[b], m[a]
        score += best_gain


def smatch_hill_climb(g1: AmrGraph, g2: AmrGraph, restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> SmatchScore:
    """Restarted hill climbing; the first start is concept-greedy, the rest random.

    Deterministic for a given ``seed``. Adding restarts only appends starts,
    so the result never gets worse as ``restarts`` grows.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    prob = _Problem(g1, g2)
    rng = random.Random(seed)
    best_score, best_m = -1, None
    for r in range(restarts):
        start = _greedy_start(prob) if r == 0 else _random_start(prob, rng)
        score, m = _climb(prob, start)
        if score > best_score:
            best_score, best_m = score, list(m)
    return _score(best_score, prob.n_triples1, prob.n_triples2, prob.mapping_dict(best_m))


def smatch(g1, g2, restarts: int = DEFAULT_RESTARTS, seed: int = 0, exact: bool = False) -> SmatchScore:
    if exact:
        return smatch_exact(g1, g2)
    return smatch_hill_climb(g1, g2, restarts=restarts, seed=seed)


@dataclass(frozen=True)
class SmatchCorpus:
    scores: list
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    micro_f: float

    @property
    def quartiles(self) -> tuple[float, float, float, float, float]:
        return (self.minimum, self.q1, self.median, self.q3, self.maximum)


def summarize_f(scores: Sequence[SmatchScore]) -> SmatchCorpus:
    if not scores:
        raise ValueError("no scores to summarize")
    fs = np.array([s.f for s in scores], dtype=float)
    q = np.percentile(fs, [0, 25, 50, 75, 100])
    matches = sum(s.matches for s in scores)
    n1 = sum(s.triples_test for s in scores)
    n2 = sum(s.triples_gold for s in scores)
    micro = _score(matches, n1, n2, {}).f
    return SmatchCorpus(list(scores), *(float(x) for x in q), micro)


def smatch_corpus(pairs, restarts: int = DEFAULT_RESTARTS, seed: int = 0, exact: bool = False) -> SmatchCorpus:
    """Score each pair and summarise the F distribution (min, quartiles, max).

    ``micro_f`` pools matches and triple counts over the corpus, as the
    standard document-level score does.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("smatch_corpus needs at least one pair")
    return summarize_f([smatch(a, b, restarts=restarts, seed=seed, exact=exact) for a, b in pairs])

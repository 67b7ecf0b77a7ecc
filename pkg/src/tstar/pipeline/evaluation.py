"""Inference-time transfer and the reconstruction / style-agnosticity protocols."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from ..amr import AmrGraph
from ..errors import UnknownStyleError
from ..metrics.bleu import self_bleu
from ..metrics.style import _label, fit_lexicon_scorer, mask_for_style_probe
from ..tagging import HeuristicTagger, Tagger
from ..wmd.embeddings import EmbeddingStore
from ..wmd.extract import DEFAULT_CONFIG, ExtractionConfig, extract_amr_content, extract_sentence_content
from ..wmd.metrics import wmd
from .corpora import MonoStyleCorpus


def style_transfer(sentence: str, source_style: str, target_style: str, encoder, decoders: Mapping) -> tuple[str, AmrGraph]:
    """Encode ``sentence``, decode in ``target_style``; also return the intermediate graph."""
    if target_style not in decoders:
        raise UnknownStyleError(f"no decoder for target style {target_style!r}")
    graph = encoder.to_amr(sentence)
    return decoders[target_style].to_text(graph), graph


@dataclass(frozen=True)
class ReconstructionReport:
    style: str
    wmd: float
    sim: float
    self_bleu: float
    style_retention: float
    n: int

    def tsv_row(self) -> str:
        vals = (self.wmd, self.sim, self.self_bleu, self.style_retention)
        return "\t".join([self.style, *(f"{v:.6f}" for v in vals), str(self.n)])


RECONSTRUCTION_COLUMNS = ("style", "WMD", "SIM", "S-BLEU", "S.R.", "n")


def reconstruction_eval(corpus: MonoStyleCorpus, encoder, decoder, store: EmbeddingStore, sim_fn, scorer,
                        cfg: ExtractionConfig = DEFAULT_CONFIG) -> ReconstructionReport:
    """Round-trip each sentence through the encoder and its own style's decoder."""
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    dists, sims, bleus, kept = [], [], [], []
    for r in corpus.sentences:
        out = decoder.to_text(encoder.to_amr(r))
        dists.append(wmd(extract_sentence_content(r, cfg), extract_sentence_content(out, cfg), store))
        sims.append(sim_fn(r, out))
        bleus.append(self_bleu(r, out))
        kept.append(float(_label(scorer, out) == corpus.style))
    n = len(corpus)
    return ReconstructionReport(corpus.style, math.fsum(dists) / n, math.fsum(sims) / n,
                                math.fsum(bleus) / n, math.fsum(kept) / n, n)


@dataclass(frozen=True)
class ProbeResult:
    """Accuracy per input variant and style, plus the per-variant averages."""

    styles: tuple
    accuracy: dict  # variant -> style -> accuracy

    def average(self, variant: str) -> float:
        row = self.accuracy[variant]
        return math.fsum(row[s] for s in self.styles) / len(self.styles)

    def format_tsv(self) -> str:
        variants = list(self.accuracy)
        lines = ["\t".join(["style", *variants])]
        for s in self.styles:
            lines.append("\t".join([s, *(f"{self.accuracy[v][s]:.6f}" for v in variants)]))
        lines.append("\t".join(["average", *(f"{self.average(v):.6f}" for v in variants)]))
        return "\n".join(lines) + "\n"


def _split(sentences: Sequence[str]):
    # alternate items so both halves see the whole corpus range
    return list(sentences[0::2]), list(sentences[1::2])


def style_agnosticity_probe(corpora: Mapping[str, MonoStyleCorpus], encoder, tagger: Tagger | None = None,
                            scorer_factory: Callable = fit_lexicon_scorer, paraphraser: Callable[[str], str] | None = None,
                            cfg: ExtractionConfig = DEFAULT_CONFIG) -> ProbeResult:
    """How much style signal survives in each input representation.

    Per style the corpus is split into alternating train/test halves. Each
    sentence becomes up to three token sequences (original, paraphrased
    when ``paraphraser`` is given, and the encoder graph's content tokens),
    masked with :func:`mask_for_style_probe`. A scorer is fitted per
    variant on the training halves and scored on the test halves.
    """
    tagger = tagger or HeuristicTagger()
    styles = tuple(corpora)
    if len(styles) < 2:
        raise ValueError("the probe needs at least two styles")

    def variants(sentence: str) -> dict[str, list[str]]:
        out = {"original": mask_for_style_probe(sentence.lower().split(), tagger, cfg)}
        if paraphraser is not None:
            out["paraphrase"] = mask_for_style_probe(paraphraser(sentence).lower().split(), tagger, cfg)
        out["amr"] = mask_for_style_probe(extract_amr_content(encoder.to_amr(sentence), cfg), tagger, cfg, amr=True)
        return out

    splits = {s: _split(corpora[s].sentences) for s in styles}
    for s, (train, test) in splits.items():
        if not train or not test:
            raise ValueError(f"corpus for {s!r} needs at least two sentences")
    train_seqs = {s: [variants(x) for x in splits[s][0]] for s in styles}
    test_seqs = {s: [variants(x) for x in splits[s][1]] for s in styles}
    names = list(next(iter(train_seqs.values()))[0])

    accuracy = {}
    for v in names:
        scorer = scorer_factory([(seq[v], s) for s in styles for seq in train_seqs[s]], styles)
        accuracy[v] = {
            s: sum(_label(scorer, " ".join(seq[v])) == s for seq in test_seqs[s]) / len(test_seqs[s])
            for s in styles
        }
    return ProbeResult(styles, accuracy)

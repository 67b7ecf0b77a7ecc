import json
import shutil

import pytest

from fixtures import TOY_GOLD_SENTENCES, toy_world
from tstar.amr import canonical_penman, parse_penman
from tstar.errors import BackendError, BackendTrainingError, PipelineAbort, UnknownStyleError
from tstar.metrics import EmbeddingSimilarity, lexicon_style_scorer
from tstar.pipeline import (
    Backends,
    GoldAmrCorpus,
    MonoStyleCorpus,
    PipelineConfig,
    PipelineState,
    ToyDecoder,
    ToyEncoder,
    bootstrap_synthetic,
    build_decoder_trainset,
    encoder_trainset,
    read_gold_jsonl,
    reconstruction_eval,
    regenerate_synthetic,
    run_iteration,
    run_pipeline,
    style_agnosticity_probe,
    style_transfer,
    toy_backends,
)
from tstar.wmd import EmbeddingStore

STYLES = ("bible", "modern")
STORE = EmbeddingStore.hashed(64)
SIM = EmbeddingSimilarity(STORE)

# frozen: hash embeddings (64, seed 0), mean-embedding cosine
FILTER_FIXTURE_SIM = 0.682568


class Identity:
    def stylize(self, sentence, style):
        return sentence


class Scripted:
    """Identity styler except for a fixed rewrite table."""

    def __init__(self, table):
        self.table = table

    def stylize(self, sentence, style):
        return self.table.get(sentence, sentence)


class LookupDecoder:
    def __init__(self, gold, output=None):
        self.by_graph = {canonical_penman(g): s for s, g in gold.pairs}
        self.output = output

    def to_text(self, graph):
        return self.by_graph[canonical_penman(graph)] if self.output is None else self.output

    def fine_tune(self, pairs):
        pass


class BrokenEncoder(ToyEncoder):
    def fine_tune(self, pairs):
        raise BackendTrainingError("job failed")


def cfg(**kw):
    return PipelineConfig(STYLES, **kw)


# encoder / bootstrap ---------------------------------------------------


def test_toy_encoder_golden():
    g = ToyEncoder().to_amr("the dog ate crumbs")
    assert canonical_penman(g) == "(e / eat-01 :ARG0 (d / dog) :ARG1 (c / crumbs))"
    with pytest.raises(BackendError):
        ToyEncoder().to_amr("the of a")


def test_identity_styler_keeps_everything():
    _, gold, _ = toy_world()
    batch = bootstrap_synthetic(gold, Identity(), SIM, cfg())
    for p in STYLES:
        assert len(batch.pairs[p]) == len(gold)
        assert all(x.similarity == 1.0 for x in batch.pairs[p])
        assert batch.filter_rate(p) == 0.0


def test_delta_one_is_strict():
    b, gold, _ = toy_world()
    batch = bootstrap_synthetic(gold, b.styler, SIM, cfg(delta=1.0))
    for p in STYLES:
        assert all(x.similarity == 1.0 for x in batch.pairs[p])
        # each style rewrites at least one gold sentence
        assert len(batch.pairs[p]) < len(gold)


def test_filter_fixture():
    sentences = ["dogs chase cats", "farmers plant wheat", "great rivers flow"]
    enc = ToyEncoder()
    gold = GoldAmrCorpus(tuple((s, enc.to_amr(s)) for s in sentences))
    styler = Scripted({"farmers plant wheat": "kings plant"})
    assert round(SIM("farmers plant wheat", "kings plant"), 6) == FILTER_FIXTURE_SIM
    batch = bootstrap_synthetic(gold, styler, SIM, cfg(delta=0.7))
    for p in STYLES:
        assert [x.index for x in batch.pairs[p]] == [0, 2]
        assert batch.attempted[p] == 3
    assert len(batch) == 4


def test_wmd_filter():
    enc = ToyEncoder()
    gold = GoldAmrCorpus(tuple((s, enc.to_amr(s)) for s in ["dogs chase cats", "you eat bread"]))
    on = bootstrap_synthetic(gold, Identity(), SIM, cfg(wmd_filter=0.15), STORE)
    off = bootstrap_synthetic(gold, Identity(), SIM, cfg(), STORE)
    # "you" is a stopword on the sentence side only, so the second pair's WMD Overall is large
    assert [x.index for x in on.pairs["bible"]] == [0]
    assert [x.index for x in off.pairs["bible"]] == [0, 1]
    with pytest.raises(ValueError):
        bootstrap_synthetic(gold, Identity(), SIM, cfg(wmd_filter=0.15), None)


def test_styler_failures_abort_over_rate():
    class Flaky:
        def stylize(self, sentence, style):
            raise BackendError("down")

    _, gold, _ = toy_world()
    with pytest.raises(PipelineAbort):
        bootstrap_synthetic(gold, Flaky(), SIM, cfg())
    batch = bootstrap_synthetic(gold, Flaky(), SIM, cfg(max_failure_rate=1.0))
    assert len(batch) == 0 and len(batch.failures) == 2 * len(gold)


# decoder train sets / regeneration ------------------------------------


def test_decoder_trainset():
    b, _, mono = toy_world()
    ds = build_decoder_trainset(mono["bible"], b.encoder)
    assert len(ds.pairs) == len(mono["bible"])
    assert set(ds.provenance) == {"bible"}
    with pytest.raises(ValueError):
        build_decoder_trainset(MonoStyleCorpus("bible", ()), b.encoder)


def test_empty_gold_rejected():
    with pytest.raises(ValueError):
        GoldAmrCorpus(())


def test_regenerate_identity_and_empty():
    _, gold, _ = toy_world()
    batch = regenerate_synthetic(gold, {p: LookupDecoder(gold) for p in STYLES}, SIM, cfg())
    assert all(len(batch.pairs[p]) == len(gold) for p in STYLES)
    empty = regenerate_synthetic(gold, {p: LookupDecoder(gold, "") for p in STYLES}, SIM, cfg())
    assert len(empty) == 0 and not empty.failures
    kept = regenerate_synthetic(gold, {p: LookupDecoder(gold, "") for p in STYLES}, SIM, cfg(refilter=False))
    assert len(kept) == 2 * len(gold)


def test_encoder_trainset_dedup():
    _, gold, _ = toy_world()
    batch = bootstrap_synthetic(gold, Identity(), SIM, cfg())
    assert len(encoder_trainset(gold, batch)) == len(gold)


# full loop -------------------------------------------------------------


def run(tmp_path=None, iterations=2, seed=0, **kw):
    b, gold, mono = toy_world(seed)
    return run_pipeline(cfg(iterations=iterations, seed=seed, **kw), b, gold, mono, SIM, STORE, tmp_path)


def test_size_laws_and_audit(tmp_path):
    r = run(tmp_path)
    n, k = len(TOY_GOLD_SENTENCES), len(STYLES)
    assert len(r.logs) == 2
    for entry in r.logs:
        assert entry["sizes"]["encoder_train"] <= n * (1 + k)
        assert entry["sizes"]["synthetic_out"] <= n * k
    for pair in r.state.synthetic.all_pairs():
        assert pair.similarity >= 0.7
    for it in ("iteration_01", "iteration_02"):
        for p in STYLES:
            rows = [json.loads(x) for x in (tmp_path / it / f"decoder_train_{p}.jsonl").read_text().splitlines()]
            assert rows and {r_["style"] for r_ in rows} == {p}
            for r_ in rows:
                parse_penman(r_["penman"])
        x = (tmp_path / it / "encoder_train.jsonl").read_text().splitlines()
        assert len(x) <= n * (1 + k)
    assert sorted(p.name for p in tmp_path.iterdir()) == ["bootstrap", "config.json", "iteration_01", "iteration_02", "log.json"]


def test_single_iteration(tmp_path):
    r = run(tmp_path, iterations=1)
    assert [e["iteration"] for e in r.logs] == [1]
    assert not (tmp_path / "iteration_02").exists()


def test_deterministic(tmp_path):
    run(tmp_path / "a")
    run(tmp_path / "b")
    for name in ("log.json", "iteration_01/log.json", "iteration_02/log.json", "iteration_02/synthetic.jsonl"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_resume(tmp_path):
    run(tmp_path)
    full = (tmp_path / "log.json").read_bytes()
    shutil.rmtree(tmp_path / "iteration_02")
    (tmp_path / "log.json").unlink()
    r = run(tmp_path)
    assert (tmp_path / "log.json").read_bytes() == full
    assert len(r.logs) == 2


def test_resume_rejects_other_config(tmp_path):
    run(tmp_path, iterations=1)
    with pytest.raises(ValueError, match="different configuration"):
        run(tmp_path, iterations=1, delta=0.5)


def test_training_failure_aborts(tmp_path):
    b, gold, mono = toy_world()
    broken = Backends(BrokenEncoder(), b.decoders, b.styler)
    with pytest.raises(PipelineAbort) as info:
        run_pipeline(cfg(), broken, gold, mono, SIM, STORE, tmp_path)
    assert info.value.iteration == 1
    assert (tmp_path / "bootstrap" / "COMPLETE").exists()
    assert not (tmp_path / "iteration_01").exists()

    state = PipelineState(gold, mono, broken, bootstrap_synthetic(gold, b.styler, SIM, cfg()))
    with pytest.raises(PipelineAbort):
        run_iteration(state, SIM, cfg())
    assert state.iteration == 0 and state.logs == []


def test_missing_style_corpus():
    b, gold, mono = toy_world()
    with pytest.raises(ValueError):
        run_pipeline(cfg(), b, gold, {"bible": mono["bible"]}, SIM)


def test_read_gold_jsonl(tmp_path):
    p = tmp_path / "gold.jsonl"
    p.write_text('{"text": "dogs bark", "penman": "(b / bark-01 :ARG0 (d / dog))"}\n')
    gold = read_gold_jsonl(p)
    assert gold.sentences == ["dogs bark"]


# inference and evaluation --------------------------------------------


def test_style_transfer():
    b = toy_backends({"bible": {"you": "thou"}, "modern": {}})
    text, graph = style_transfer("you eat bread", "modern", "bible", b.encoder, b.decoders)
    assert text == "thou eat bread"
    assert canonical_penman(graph) == "(e / eat-01 :ARG0 (y / you) :ARG1 (b / bread))"
    with pytest.raises(UnknownStyleError):
        style_transfer("you eat bread", "modern", "pirate", b.encoder, b.decoders)


def test_reconstruction_eval():
    corpus = MonoStyleCorpus("bible", ("dogs eat crumbs", "farmers plant wheat"))
    # unmarked outputs fall back to the first style, here modern
    scorer = lexicon_style_scorer({"modern": {"phones"}, "bible": {"dogs"}})
    rep = reconstruction_eval(corpus, ToyEncoder(), ToyDecoder("bible"), STORE, SIM, scorer)
    assert (rep.wmd, rep.sim, rep.self_bleu, rep.n) == (0.0, 1.0, 1.0, 2)
    assert rep.style_retention == 0.5
    assert rep.tsv_row() == "bible\t0.000000\t1.000000\t1.000000\t0.500000\t2"


def test_probe_amr_not_above_original(tmp_path):
    r = run(tmp_path)
    _, _, mono = toy_world()
    res = style_agnosticity_probe(mono, r.backends.encoder)
    assert res.average("original") == 0.875
    assert res.average("amr") <= res.average("original")
    # the tuned encoder maps markers to generic lemmas, so the AMR side loses them
    assert res.average("amr") < res.average("original")
    assert res.format_tsv().splitlines()[0] == "style\toriginal\tamr"


def test_probe_with_paraphraser():
    b, _, mono = toy_world()
    res = style_agnosticity_probe(mono, b.encoder, paraphraser=lambda s: s)
    assert list(res.accuracy) == ["original", "paraphrase", "amr"]
    assert res.accuracy["paraphrase"] == res.accuracy["original"]

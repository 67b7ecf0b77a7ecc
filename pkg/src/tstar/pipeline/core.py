"""The iterative encoder/decoder loop over pluggable backends.

One pass of :func:`run_iteration`::

    X   = S  u  S_hat                      (deduplicated)
    encoder.fine_tune(X)
    for each style p:
        R_hat_p = [(r, encoder(r)) for r in R_p]
        decoder_p.fine_tune(R_hat_p)
        S_hat_p = [(decoder_p(A_i), A_i)], similarity-filtered against s_i
    S_hat = union of S_hat_p

:func:`run_pipeline` bootstraps ``S_hat`` once with the styler and then runs
a fixed number of passes.
"""

from __future__ import annotations

import json
import logging
import math
import shutil
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable, Mapping, Sequence

from ..amr import AmrGraph, canonical_penman
from ..errors import BackendError, IncomparableInputsError, PipelineAbort, TstarError
from ..smatch import smatch
from ..wmd.embeddings import EmbeddingStore
from ..wmd.metrics import wmd_overall
from .corpora import (
    DecoderTrainSet,
    GoldAmrCorpus,
    ItemFailure,
    MonoStyleCorpus,
    SyntheticBatch,
    SyntheticPair,
    read_synthetic_jsonl,
    synthetic_rows,
    write_pairs_jsonl,
)
from .interfaces import Backends

log = logging.getLogger(__name__)

DEFAULT_WMD_CEILING = 0.15


@dataclass(frozen=True)
class PipelineConfig:
    styles: tuple
    delta: float = 0.7
    wmd_filter: float | None = None  # WMD Overall ceiling; None disables the filter
    iterations: int = 2
    seed: int = 0
    refilter: bool = True
    max_failure_rate: float = 0.1
    max_in_flight: int = 1

    def __post_init__(self):
        object.__setattr__(self, "styles", tuple(self.styles))
        if len(set(self.styles)) < 2 or len(set(self.styles)) != len(self.styles):
            raise ValueError("need at least two distinct styles")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if self.wmd_filter is not None and self.wmd_filter <= 0:
            raise ValueError("wmd_filter ceiling must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0.0 <= self.max_failure_rate <= 1.0:
            raise ValueError("max_failure_rate must lie in [0, 1]")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["styles"] = list(self.styles)
        return d


class _Failed:
    __slots__ = ("error",)

    def __init__(self, error):
        self.error = error


def _map_items(fn: Callable, items: Sequence, max_in_flight: int = 1) -> list:
    """Apply ``fn`` to every item, returning results in input order.

    Backend and AMR errors are captured as :class:`_Failed` rather than
    raised; anything else propagates.
    """

    def call(item):
        try:
            return fn(item)
        except (TstarError, ValueError) as exc:
            return _Failed(exc)

    if max_in_flight <= 1 or len(items) <= 1:
        return [call(x) for x in items]
    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        return list(pool.map(call, items))


def _check_failures(failures: int, attempted: int, cfg: PipelineConfig, what: str, iteration):
    if attempted and failures / attempted > cfg.max_failure_rate:
        raise PipelineAbort(f"{what}: {failures}/{attempted} items failed (limit {cfg.max_failure_rate:.0%})", iteration)


def _similarity(sim_fn, a: str, b: str) -> float:
    # an output with nothing left to compare counts as maximally dissimilar
    try:
        return float(sim_fn(a, b))
    except IncomparableInputsError:
        return 0.0


def _passes_wmd(sentence: str, graph: AmrGraph, cfg: PipelineConfig, store: EmbeddingStore | None) -> bool:
    if cfg.wmd_filter is None:
        return True
    if store is None:
        raise ValueError("the WMD filter needs an embedding store")
    try:
        return wmd_overall(sentence, graph, store) < cfg.wmd_filter
    except IncomparableInputsError:
        return False


def _filtered_batch(gold, candidates_by_style, sim_fn, cfg, store, stage, apply_filter=True, iteration=None):
    batch = SyntheticBatch({p: [] for p in cfg.styles}, {p: 0 for p in cfg.styles})
    for p in cfg.styles:
        outputs = candidates_by_style[p]
        batch.attempted[p] = len(outputs)
        n_failed = 0
        for i, ((s, graph), out) in enumerate(zip(gold.pairs, outputs)):
            if isinstance(out, _Failed):
                n_failed += 1
                batch.failures.append(ItemFailure(stage, p, i, str(out.error)))
                log.warning("%s failed for style %s item %d: %s", stage, p, i, out.error)
                continue
            sim = _similarity(sim_fn, s, out)
            if apply_filter and (sim < cfg.delta or not _passes_wmd(out, graph, cfg, store)):
                continue
            batch.pairs[p].append(SyntheticPair(out, graph, p, sim, i))
        _check_failures(n_failed, len(outputs), cfg, f"{stage} ({p})", iteration)
    return batch


def bootstrap_synthetic(gold: GoldAmrCorpus, styler, sim_fn, cfg: PipelineConfig, store: EmbeddingStore | None = None) -> SyntheticBatch:
    """Stylize every gold sentence into every style and keep the faithful ones.

    A pair ``(stylize(s_i, p), A_i)`` is kept iff ``sim(s_i, stylized) >= delta``
    and, when the WMD filter is on, its WMD Overall against ``A_i`` is below
    the ceiling.
    """
    if styler is None:
        raise ValueError("bootstrapping needs a styler backend")
    cands = {p: _map_items(lambda s, p=p: styler.stylize(s, p), gold.sentences, cfg.max_in_flight) for p in cfg.styles}
    return _filtered_batch(gold, cands, sim_fn, cfg, store, "stylize", iteration=0)


def build_decoder_trainset(corpus: MonoStyleCorpus, encoder, max_in_flight: int = 1) -> DecoderTrainSet:
    """Pair every sentence of a mono-style corpus with the encoder's graph for it."""
    if len(corpus) == 0:
        raise ValueError(f"mono-style corpus for {corpus.style!r} is empty")
    results = _map_items(encoder.to_amr, list(corpus.sentences), max_in_flight)
    pairs, failures = [], []
    for i, (r, g) in enumerate(zip(corpus.sentences, results)):
        if isinstance(g, _Failed):
            failures.append(ItemFailure("encode", corpus.style, i, str(g.error)))
            log.warning("encoding failed for %s item %d: %s", corpus.style, i, g.error)
        else:
            pairs.append((r, g))
    return DecoderTrainSet(corpus.style, tuple(pairs), tuple(failures), tuple(corpus.style for _ in pairs))


def regenerate_synthetic(gold: GoldAmrCorpus, decoders: Mapping, sim_fn, cfg: PipelineConfig,
                         store: EmbeddingStore | None = None, iteration=None) -> SyntheticBatch:
    """Decode every gold graph into every style; re-filter when ``cfg.refilter``."""
    missing = [p for p in cfg.styles if p not in decoders]
    if missing:
        raise ValueError(f"no decoder for styles {missing}")
    graphs = [g for _, g in gold.pairs]
    cands = {p: _map_items(decoders[p].to_text, graphs, cfg.max_in_flight) for p in cfg.styles}
    return _filtered_batch(gold, cands, sim_fn, cfg, store, "decode", apply_filter=cfg.refilter, iteration=iteration)


def encoder_trainset(gold: GoldAmrCorpus, synthetic: SyntheticBatch) -> list[tuple[str, AmrGraph]]:
    """``S u S_hat`` with exact duplicates (sentence, canonical graph) removed, first occurrence kept."""
    seen = set()
    out = []
    for s, g in list(gold.pairs) + [(p.sentence, p.graph) for p in synthetic.all_pairs()]:
        key = (s, canonical_penman(g))
        if key not in seen:
            seen.add(key)
            out.append((s, g))
    return out


@dataclass
class PipelineState:
    gold: GoldAmrCorpus
    mono: Mapping[str, MonoStyleCorpus]
    backends: Backends
    synthetic: SyntheticBatch
    iteration: int = 0
    logs: list = field(default_factory=list)
    # artifacts of the last pass, kept for writing and audits
    last_x: list = field(default_factory=list)
    last_decoder_sets: dict = field(default_factory=dict)


def _r6(x):
    return None if x is None else round(float(x), 6)


def _mean(xs):
    xs = list(xs)
    return math.fsum(xs) / len(xs) if xs else None


def _synthetic_summary(batch: SyntheticBatch, cfg: PipelineConfig) -> dict:
    return {
        "kept": {p: len(batch.pairs.get(p, ())) for p in cfg.styles},
        "attempted": {p: batch.attempted.get(p, 0) for p in cfg.styles},
        "filter_rate": {p: _r6(batch.filter_rate(p)) for p in cfg.styles},
        "mean_similarity": {p: _r6(_mean(x.similarity for x in batch.pairs.get(p, ()))) for p in cfg.styles},
        "failures": len(batch.failures),
    }


def _encoder_smatch(gold: GoldAmrCorpus, encoder, cfg: PipelineConfig):
    outs = _map_items(encoder.to_amr, gold.sentences, cfg.max_in_flight)
    fs = [smatch(o, g, seed=cfg.seed).f for o, (_, g) in zip(outs, gold.pairs) if not isinstance(o, _Failed)]
    return _r6(_mean(fs))


def run_iteration(state: PipelineState, sim_fn, cfg: PipelineConfig, store: EmbeddingStore | None = None) -> PipelineState:
    """One loop body; returns a new state and leaves ``state`` untouched.

    Backend training failures raise :class:`PipelineAbort` carrying the
    iteration index.
    """
    k = state.iteration + 1
    b = state.backends
    x = encoder_trainset(state.gold, state.synthetic)
    try:
        b.encoder.fine_tune(x)
    except BackendError as exc:
        raise PipelineAbort(f"encoder fine-tuning failed: {exc}", k) from exc
    decoder_sets = {}
    for p in cfg.styles:
        ds = build_decoder_trainset(state.mono[p], b.encoder, cfg.max_in_flight)
        _check_failures(len(ds.failures), len(state.mono[p]), cfg, f"encode ({p})", k)
        try:
            b.decoders[p].fine_tune(list(ds.pairs))
        except BackendError as exc:
            raise PipelineAbort(f"decoder fine-tuning failed for {p}: {exc}", k) from exc
        decoder_sets[p] = ds
    synthetic = regenerate_synthetic(state.gold, b.decoders, sim_fn, cfg, store, iteration=k)
    entry = {
        "iteration": k,
        "sizes": {
            "gold": len(state.gold),
            "synthetic_in": len(state.synthetic),
            "encoder_train": len(x),
            "decoder_train": {p: len(decoder_sets[p].pairs) for p in cfg.styles},
            "synthetic_out": len(synthetic),
        },
        "encode_failures": {p: len(decoder_sets[p].failures) for p in cfg.styles},
        "synthetic": _synthetic_summary(synthetic, cfg),
        "snapshot": {"encoder_smatch_f": _encoder_smatch(state.gold, b.encoder, cfg)},
    }
    return replace(state, synthetic=synthetic, iteration=k, logs=state.logs + [entry],
                   last_x=x, last_decoder_sets=decoder_sets)


def dump_log(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


@dataclass
class PipelineResult:
    backends: Backends
    bootstrap_log: dict
    logs: list
    state: PipelineState

    @property
    def report(self) -> dict:
        return {"bootstrap": self.bootstrap_log, "iterations": self.logs}


def _iteration_dir(out: Path, k: int) -> Path:
    return out / f"iteration_{k:02d}"


def _write_stage(path: Path, files: Mapping[str, object]) -> None:
    # written into a scratch directory and renamed so a crash never leaves a
    # half-written stage that looks complete
    tmp = path.with_name(path.name + ".tmp")
    if tmp.exists():
        shutil.rmtree(tmp)
    tmp.mkdir(parents=True)
    for name, content in files.items():
        if isinstance(content, list):
            write_pairs_jsonl(tmp / name, content)
        else:
            (tmp / name).write_text(content, encoding="utf-8")
    (tmp / "COMPLETE").write_text("", encoding="utf-8")
    if path.exists():
        shutil.rmtree(path)
    tmp.rename(path)


def _complete(path: Path) -> bool:
    return (path / "COMPLETE").exists()


def run_pipeline(cfg: PipelineConfig, backends: Backends, gold: GoldAmrCorpus, mono: Mapping[str, MonoStyleCorpus],
                 sim_fn, store: EmbeddingStore | None = None, out_dir=None) -> PipelineResult:
    """Bootstrap once, then ``cfg.iterations`` passes of :func:`run_iteration`.

    With ``out_dir`` every stage is written under it (``bootstrap/``,
    ``iteration_XX/``, then ``log.json``) and a rerun resumes after the last
    stage carrying a ``COMPLETE`` marker. Resuming requires the same config.
    """
    for p in cfg.styles:
        if p not in mono:
            raise ValueError(f"no mono-style corpus for {p!r}")
        if p not in backends.decoders:
            raise ValueError(f"no decoder for {p!r}")
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        cfg_text = dump_log(cfg.as_dict())
        cfg_path = out / "config.json"
        if cfg_path.exists() and cfg_path.read_text(encoding="utf-8") != cfg_text:
            raise ValueError(f"{out} holds a run with a different configuration")
        cfg_path.write_text(cfg_text, encoding="utf-8")

    boot_dir = out / "bootstrap" if out is not None else None
    if boot_dir is not None and _complete(boot_dir):
        boot_log = json.loads((boot_dir / "log.json").read_text(encoding="utf-8"))
        synthetic = read_synthetic_jsonl(boot_dir / "synthetic.jsonl", cfg.styles)
        log.info("resuming: bootstrap loaded from %s", boot_dir)
    else:
        synthetic = bootstrap_synthetic(gold, backends.styler, sim_fn, cfg, store)
        boot_log = {"iteration": 0, "sizes": {"gold": len(gold), "synthetic_out": len(synthetic)},
                    "synthetic": _synthetic_summary(synthetic, cfg)}
        if boot_dir is not None:
            _write_stage(boot_dir, {"synthetic.jsonl": synthetic_rows(synthetic), "log.json": dump_log(boot_log)})

    state = PipelineState(gold, mono, backends, synthetic)
    if out is not None:
        done = [k for k in range(1, cfg.iterations + 1) if _complete(_iteration_dir(out, k))]
        last = 0
        for k in done:
            if k != last + 1:
                break
            last = k
        if last:
            d = _iteration_dir(out, last)
            backends.load_state_dict(json.loads((d / "backends.json").read_text(encoding="utf-8")))
            logs = [json.loads((_iteration_dir(out, k) / "log.json").read_text(encoding="utf-8")) for k in range(1, last + 1)]
            state = replace(state, synthetic=read_synthetic_jsonl(d / "synthetic.jsonl", cfg.styles), iteration=last, logs=logs)
            log.info("resuming after iteration %d", last)

    while state.iteration < cfg.iterations:
        state = run_iteration(state, sim_fn, cfg, store)
        log.info("iteration %d: |X|=%d |S_hat|=%d", state.iteration, len(state.last_x), len(state.synthetic))
        if out is not None:
            files = {
                "encoder_train.jsonl": [{"text": s, "penman": canonical_penman(g)} for s, g in state.last_x],
                "synthetic.jsonl": synthetic_rows(state.synthetic),
                "log.json": dump_log(state.logs[-1]),
                "backends.json": dump_log(backends.state_dict()),
            }
            for p, ds in state.last_decoder_sets.items():
                files[f"decoder_train_{p}.jsonl"] = [
                    {"text": s, "penman": canonical_penman(g), "style": prov} for (s, g), prov in zip(ds.pairs, ds.provenance)
                ]
            _write_stage(_iteration_dir(out, state.iteration), files)

    result = PipelineResult(backends, boot_log, state.logs, state)
    if out is not None:
        (out / "log.json").write_text(dump_log({"config": cfg.as_dict(), **result.report}), encoding="utf-8")
    return result

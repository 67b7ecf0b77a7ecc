"""Command-line entry point.

Exit codes are shared by every command: 0 success, 1 usage or format
error, 2 some items failed, 3 inputs cannot be compared (an extraction
came out empty), 4 the pipeline aborted.
"""

from __future__ import annotations

import argparse
import contextlib
import configparser
import json
import logging
import os
import sys
from pathlib import Path

from .amr import (
    delinearize,
    graph_from_record,
    graph_to_record,
    linearize_dfs,
    parse_penman,
    read_penman_blocks,
    serialize_penman,
    split_linearized,
)
from .errors import (
    BackendError,
    IncomparableInputsError,
    InstanceSchemaError,
    PipelineAbort,
    SmatchSizeError,
    TstarError,
)
from .smatch import DEFAULT_RESTARTS, smatch, summarize_f
from .tagging import HeuristicTagger
from .wmd import (
    EmbeddingStore,
    ExtractionConfig,
    HashFallback,
    Skip,
    extract_amr_content,
    extract_amr_verbs,
    extract_sentence_content,
    extract_sentence_verbs,
    load_embeddings,
    load_stopwords,
    wmd,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL = 2
EXIT_INCOMPARABLE = 3
EXIT_ABORT = 4

log = logging.getLogger("tstar.cli")


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"tstar: {msg}", file=sys.stderr)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _open_out(path):
    if path in (None, "-"):
        # leave stdout open for the caller
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8")


# embeddings / extraction config ------------------------------------------------


def _parse_hash_spec(spec: str) -> tuple[int, int]:
    try:
        dim, _, seed = spec.partition(",")
        return int(dim), int(seed or 0)
    except ValueError:
        raise UsageError(f"--hash-embeddings expects DIM,SEED, got {spec!r}") from None


def _store(embeddings=None, hash_spec=None, oov="hash", hash_seed=0) -> EmbeddingStore:
    if embeddings and hash_spec:
        raise UsageError("give either --embeddings or --hash-embeddings, not both")
    if embeddings:
        policy = Skip() if oov == "skip" else HashFallback(hash_seed)
        return load_embeddings(embeddings, policy)
    dim, seed = _parse_hash_spec(hash_spec or "64,0")
    if dim < 1:
        raise UsageError("hash embedding dimension must be positive")
    return EmbeddingStore.hashed(dim, seed)


def _extraction_config(args) -> ExtractionConfig:
    kw = {}
    if getattr(args, "stopwords", None):
        kw["stopwords"] = load_stopwords(args.stopwords)
    if getattr(args, "drop_punctuation", False):
        kw["keep_punctuation"] = False
    return ExtractionConfig(**kw)


def _add_embedding_args(p):
    p.add_argument("--embeddings", help="plain-text embedding file")
    p.add_argument("--hash-embeddings", metavar="DIM,SEED", help="hash-derived vectors instead of a file (default 64,0)")
    p.add_argument("--oov", choices=("hash", "skip"), default="hash", help="out-of-vocabulary policy for --embeddings")
    p.add_argument("--stopwords", help="stopword file, one token per line (default: bundled English list)")
    p.add_argument("--drop-punctuation", action="store_true", help="drop punctuation-only tokens from sentence content")


# amr ---------------------------------------------------------------------------


def _read_input_blocks(mode: str, path: str) -> list[str]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    if mode in ("parse", "linearize"):
        from .amr import split_blocks

        return split_blocks(text)
    return [line for line in text.splitlines() if line.strip()]


def cmd_amr(args) -> int:
    blocks = _read_input_blocks(args.mode, args.input)
    failures = 0
    with _open_out(args.output) as out:
        for i, block in enumerate(blocks, 1):
            try:
                if args.mode == "parse":
                    rendered = json.dumps(graph_to_record(parse_penman(block)), ensure_ascii=False)
                elif args.mode == "serialize":
                    try:
                        record = json.loads(block)
                    except json.JSONDecodeError as exc:
                        raise ValueError(f"invalid JSON ({exc.msg})") from None
                    rendered = serialize_penman(graph_from_record(record)) + "\n"
                elif args.mode == "linearize":
                    rendered = str(linearize_dfs(parse_penman(block)))
                else:
                    repairs: list[str] = []
                    graph = delinearize(split_linearized(block), repairs)
                    for r in repairs:
                        print(f"block {i}: repaired: {r}", file=sys.stderr)
                    rendered = serialize_penman(graph) + "\n"
            except (TstarError, ValueError) as exc:
                failures += 1
                print(f"block {i}: error: {exc}", file=sys.stderr)
                continue
            out.write(rendered + "\n")
    return EXIT_PARTIAL if failures else EXIT_OK


# smatch --------------------------------------------------------------------------


def cmd_smatch(args) -> int:
    a = read_penman_blocks(args.file_a)
    b = read_penman_blocks(args.file_b)
    if len(a) != len(b):
        raise UsageError(f"block counts differ: {len(a)} in {args.file_a}, {len(b)} in {args.file_b}")
    scores, rows, failures = [], [], 0
    for i, (ta, tb) in enumerate(zip(a, b), 1):
        try:
            s = smatch(parse_penman(ta), parse_penman(tb), restarts=args.restarts, seed=args.seed, exact=args.exact)
        except SmatchSizeError:
            raise
        except (TstarError, ValueError) as exc:
            failures += 1
            print(f"block {i}: error: {exc}", file=sys.stderr)
            continue
        scores.append(s)
        rows.append((i, s))
        print(s.format())
    if args.tsv:
        with _open_out(args.tsv) as out:
            out.write("pair\tmatches\ttriples_test\ttriples_gold\tprecision\trecall\tf\n")
            for i, s in rows:
                out.write(f"{i}\t{s.matches}\t{s.triples_test}\t{s.triples_gold}\t"
                          f"{_fmt(s.precision)}\t{_fmt(s.recall)}\t{_fmt(s.f)}\n")
    if scores:
        summary = summarize_f(scores)
        print(
            "F-score quartiles: min {:.4f}  q1 {:.4f}  median {:.4f}  q3 {:.4f}  max {:.4f}".format(*summary.quartiles)
        )
        print(f"Corpus F-score: {summary.micro_f:.4f}")
    return EXIT_PARTIAL if failures else EXIT_OK


# wmd -----------------------------------------------------------------------------


def _read_amr_arg(args):
    if args.amr_file:
        return parse_penman(Path(args.amr_file).read_text(encoding="utf-8"))
    return parse_penman(args.amr)


def cmd_wmd(args) -> int:
    cfg = _extraction_config(args)
    store = _store(args.embeddings, args.hash_embeddings, args.oov)
    explain = []
    if args.sentence_a is not None or args.sentence_b is not None:
        if args.sentence_a is None or args.sentence_b is None:
            raise UsageError("--sentence-a and --sentence-b go together")
        if args.sentence is not None or args.amr is not None or args.amr_file is not None:
            raise UsageError("choose either the sentence pair or the sentence/AMR form")
        if args.verbs:
            tagger = HeuristicTagger()
            left = extract_sentence_verbs(args.sentence_a, tagger)
            right = extract_sentence_verbs(args.sentence_b, tagger)
            explain = [("a_verbs", left), ("b_verbs", right)]
        else:
            left = extract_sentence_content(args.sentence_a, cfg)
            right = extract_sentence_content(args.sentence_b, cfg)
            explain = [("a_content", left), ("b_content", right)]
    else:
        if args.sentence is None or (args.amr is None and args.amr_file is None):
            raise UsageError("give --sentence-a/--sentence-b, or --sentence with --amr or --amr-file")
        graph = _read_amr_arg(args)
        sent_content = extract_sentence_content(args.sentence, cfg)
        amr_content = extract_amr_content(graph, cfg)
        sent_verbs = extract_sentence_verbs(args.sentence, HeuristicTagger())
        amr_verbs = extract_amr_verbs(graph, cfg)
        explain = [
            ("sentence_content", sent_content),
            ("sentence_verbs", sent_verbs),
            ("amr_content", amr_content),
            ("amr_verbs", amr_verbs),
        ]
        left, right = (sent_verbs, amr_verbs) if args.verbs else (sent_content, amr_content)
    if args.explain:
        for label, toks in explain:
            print(f"{label}\t{' '.join(toks)}")
    kind = "verb" if args.verbs else "content"
    if not left or not right:
        raise IncomparableInputsError(f"{kind} extraction is empty on the {'first' if not left else 'second'} side")
    print(_fmt(wmd(left, right, store)))
    return EXIT_OK


# eval ----------------------------------------------------------------------------


def _scorer(spec: str, styles, args):
    from .metrics import lexicon_style_scorer, read_lexicon_file

    kind, _, target = spec.partition(":")
    if kind == "lexicon" and target:
        lex = read_lexicon_file(target)
        order = [s for s in styles if s in lex] + sorted(s for s in lex if s not in styles)
        for s in styles:
            if s not in lex:
                lex[s] = set()
                order.append(s)
        return lexicon_style_scorer(lex, order)
    if kind == "remote" and target:
        from .pipeline.remote import RemoteSession, RemoteStyleScorer

        return RemoteStyleScorer(RemoteSession(target, timeout=args.timeout, retries=args.retries), styles)
    raise UsageError(f"--scorer expects lexicon:PATH or remote:URL, got {spec!r}")


def cmd_eval(args) -> int:
    from .metrics import EmbeddingSimilarity, evaluate_directions, format_json, format_tsv, read_instances

    instances = read_instances(args.input)
    styles = []
    for x in instances:
        for s in x.direction:
            if s not in styles:
                styles.append(s)
    cfg = _extraction_config(args)
    store = _store(args.embeddings, args.hash_embeddings, args.oov)
    scorer = _scorer(args.scorer, styles, args)
    reports = evaluate_directions(instances, scorer, EmbeddingSimilarity(store, cfg), store, cfg)
    text = format_json(reports) if args.format == "json" else format_tsv(reports)
    with _open_out(args.report) as out:
        out.write(text)
    return EXIT_OK


# pipeline ------------------------------------------------------------------------

PATH_KEYS = ("gold", "output", "lexicons", "embeddings", "stopwords", "verbs")


def _truthy(value: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {value!r}")


def load_pipeline_config(path) -> dict:
    """Read the flat ``[pipeline]`` section; environment variables override path keys.

    ``TSTAR_<KEY>`` overrides ``<key>`` for the path keys, and
    ``TSTAR_CORPUS_<STYLE>`` overrides ``corpus.<style>``. Relative paths
    are resolved against the config file's directory.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";",))
    parser.optionxform = str
    path = Path(path)
    if not parser.read(path, encoding="utf-8"):
        raise UsageError(f"cannot read config {path}")
    if not parser.has_section("pipeline"):
        raise UsageError(f"{path}: missing [pipeline] section")
    raw = dict(parser.items("pipeline"))
    base = path.parent
    for key in list(raw) + [k for k in PATH_KEYS if k not in raw]:
        is_path = key in PATH_KEYS or key.startswith("corpus.")
        if not is_path:
            continue
        env = "TSTAR_" + key.replace(".", "_").upper()
        if env in os.environ:
            raw[key] = os.environ[env]
        if key in raw and raw[key]:
            p = Path(raw[key]).expanduser()
            raw[key] = str(p if p.is_absolute() else base / p)
    return raw


def _pipeline_objects(raw: dict):
    from .metrics import EmbeddingSimilarity
    from .pipeline import DEFAULT_WMD_CEILING, PipelineConfig, read_gold_jsonl, read_mono_jsonl

    styles = [s.strip() for s in raw.get("styles", "").split(",") if s.strip()]
    wf = raw.get("wmd_filter", "off").strip().lower()
    if wf in ("", "off", "none", "false", "no", "0"):
        wmd_filter = None
    elif wf in ("on", "true", "yes"):
        wmd_filter = DEFAULT_WMD_CEILING
    else:
        wmd_filter = float(wf)
    cfg = PipelineConfig(
        styles=tuple(styles),
        delta=float(raw.get("delta", 0.7)),
        wmd_filter=wmd_filter,
        iterations=int(raw.get("iterations", 2)),
        seed=int(raw.get("seed", 0)),
        refilter=_truthy(raw.get("refilter", "true")),
        max_failure_rate=float(raw.get("max_failure_rate", 0.1)),
        max_in_flight=int(raw.get("max_in_flight", 1)),
    )
    for key in ("gold", "output"):
        if not raw.get(key):
            raise UsageError(f"config key {key!r} is required")
    corpora = {}
    for s in cfg.styles:
        p = raw.get(f"corpus.{s}")
        if not p:
            raise UsageError(f"config key 'corpus.{s}' is required")
        if not Path(p).exists():
            raise UsageError(f"corpus file for {s!r} not found: {p}")
        corpora[s] = p
    if not Path(raw["gold"]).exists():
        raise UsageError(f"gold corpus not found: {raw['gold']}")
    gold = read_gold_jsonl(raw["gold"])
    mono = {s: read_mono_jsonl(p, s) for s, p in corpora.items()}
    ecfg = ExtractionConfig(stopwords=load_stopwords(raw["stopwords"])) if raw.get("stopwords") else ExtractionConfig()
    store = _store(raw.get("embeddings") or None, raw.get("hash_embeddings") or None, raw.get("oov", "hash"))
    return cfg, gold, mono, EmbeddingSimilarity(store, ecfg), store


def _pipeline_backends(raw: dict, cfg):
    kind = raw.get("backend", "toy").strip().lower()
    if kind == "toy":
        from .pipeline import toy_backends

        if not raw.get("lexicons"):
            raise UsageError("the toy backend needs a 'lexicons' JSON file")
        lex = json.loads(Path(raw["lexicons"]).read_text(encoding="utf-8"))
        if not isinstance(lex, dict) or not all(isinstance(v, dict) for v in lex.values()):
            raise UsageError("lexicons file must map style -> {lemma: surface}")
        for s in cfg.styles:
            lex.setdefault(s, {})
        verbs = json.loads(Path(raw["verbs"]).read_text(encoding="utf-8")) if raw.get("verbs") else None
        return toy_backends(lex, seed=cfg.seed, verbs=verbs)
    if kind == "remote":
        from .pipeline import remote_backend_client

        if not raw.get("endpoint"):
            raise UsageError("the remote backend needs an 'endpoint'")
        backends = remote_backend_client(
            raw["endpoint"], cfg.styles, timeout=float(raw.get("timeout", 30)), retries=int(raw.get("retries", 2)),
            max_in_flight=max(cfg.max_in_flight, 1),
        )
        backends.extra["session"].ping()
        return backends
    raise UsageError(f"unknown backend {kind!r} (expected toy or remote)")


def cmd_pipeline(args) -> int:
    from .pipeline import run_pipeline

    raw = load_pipeline_config(args.config)
    if args.output:
        raw["output"] = args.output
    cfg, gold, mono, sim_fn, store = _pipeline_objects(raw)
    try:
        backends = _pipeline_backends(raw, cfg)
    except BackendError as exc:
        raise PipelineAbort(f"backend unavailable: {exc}", 0) from exc
    try:
        result = run_pipeline(cfg, backends, gold, mono, sim_fn, store, raw["output"])
    except BackendError as exc:
        raise PipelineAbort(str(exc)) from exc
    last = result.logs[-1]
    print(f"completed {len(result.logs)} iteration(s); |S_hat| = {last['sizes']['synthetic_out']}; "
          f"log: {Path(raw['output']) / 'log.json'}")
    return EXIT_OK


# parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tstar", description="AMR tooling, metrics and the style-transfer pipeline.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amr", help="convert between Penman, JSON records and linearized tokens")
    p.add_argument("mode", choices=("parse", "serialize", "linearize", "delinearize"),
                   help="parse: Penman -> JSONL; serialize: JSONL -> Penman; linearize: Penman -> tokens; "
                        "delinearize: tokens -> Penman")
    p.add_argument("input", help="input file, '-' for stdin")
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.set_defaults(func=cmd_amr)

    p = sub.add_parser("smatch", help="SMATCH between two Penman files, block by block")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--exact", action="store_true", help="exhaustive search (small graphs only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tsv", help="also write per-pair scores as TSV to this path")
    p.set_defaults(func=cmd_smatch)

    p = sub.add_parser("wmd", help="Word Mover's Distance between sentences or a sentence and an AMR")
    p.add_argument("--sentence-a")
    p.add_argument("--sentence-b")
    p.add_argument("--sentence")
    p.add_argument("--amr", help="Penman text")
    p.add_argument("--amr-file", help="file holding one Penman graph")
    p.add_argument("--verbs", action="store_true", help="compare verb extractions instead of content")
    p.add_argument("--explain", action="store_true", help="print the extracted token lists first")
    _add_embedding_args(p)
    p.set_defaults(func=cmd_wmd)

    p = sub.add_parser("eval", help="per-direction style-transfer report from a JSONL instance file")
    p.add_argument("--input", required=True)
    p.add_argument("--report", help="output path (default stdout)")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--scorer", required=True, help="lexicon:PATH or remote:URL")
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--retries", type=int, default=2)
    _add_embedding_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pipeline", help="run the iterative pipeline")
    psub = p.add_subparsers(dest="action", required=True)
    run = psub.add_parser("run", help="run (or resume) from a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--output", help="override the config's output directory")
    run.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PipelineAbort as exc:
        _err(f"pipeline aborted: {exc}")
        return EXIT_ABORT
    except IncomparableInputsError as exc:
        _err(str(exc))
        return EXIT_INCOMPARABLE
    except (UsageError, InstanceSchemaError) as exc:
        _err(str(exc))
        return EXIT_USAGE
    except (OSError, TstarError, ValueError, KeyError) as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

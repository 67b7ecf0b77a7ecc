"""Per-direction evaluation reports and their JSONL / TSV / JSON formats."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from ..amr import AmrGraph, parse_penman
from ..errors import InstanceSchemaError
from ..wmd.embeddings import EmbeddingStore
from ..wmd.extract import DEFAULT_CONFIG, ExtractionConfig, extract_sentence_content
from ..wmd.metrics import wmd
from .bleu import self_bleu
from .style import SimilarityFn, StyleScorer, _label


@dataclass(frozen=True)
class EvalInstance:
    source: str
    target: str
    source_style: str
    target_style: str
    amr: AmrGraph | None = None

    @property
    def direction(self) -> tuple[str, str]:
        return self.source_style, self.target_style


@dataclass(frozen=True)
class DirectionReport:
    direction: tuple
    self_bleu: float
    wmd: float
    sim: float
    style_retention: float
    style_transfer: float
    weighted_style_accuracy: float
    n: int
    sim_backend: str = "unknown"

    @property
    def label(self) -> str:
        return f"{self.direction[0]}->{self.direction[1]}"


TSV_COLUMNS = ("direction", "S-BLEU", "WMD", "SIM", "S.R.", "S.T.", "WSAcc", "n", "sim_backend")


def _mean(values) -> float:
    # fsum keeps the mean independent of instance order
    values = list(values)
    return math.fsum(values) / len(values)


def direction_report(
    instances: Sequence[EvalInstance],
    scorer: StyleScorer,
    sim_fn: SimilarityFn,
    store: EmbeddingStore,
    cfg: ExtractionConfig = DEFAULT_CONFIG,
) -> DirectionReport:
    """Average every metric over the instances of a single direction.

    WMD here compares the source's and target's content tokens.
    """
    instances = list(instances)
    if not instances:
        raise ValueError("no instances")
    directions = {x.direction for x in instances}
    if len(directions) > 1:
        raise ValueError(f"instances span several directions: {sorted(directions)}")
    bleu, dist, sims, kept, moved, weighted = [], [], [], [], [], []
    for x in instances:
        label = _label(scorer, x.target)
        s = sim_fn(x.source, x.target)
        bleu.append(self_bleu(x.source, x.target))
        dist.append(wmd(extract_sentence_content(x.source, cfg), extract_sentence_content(x.target, cfg), store))
        sims.append(s)
        kept.append(float(label == x.source_style))
        moved.append(float(label == x.target_style))
        weighted.append(s if label == x.target_style else 0.0)
    return DirectionReport(
        direction=directions.pop(),
        self_bleu=_mean(bleu),
        wmd=_mean(dist),
        sim=_mean(sims),
        style_retention=_mean(kept),
        style_transfer=_mean(moved),
        weighted_style_accuracy=_mean(weighted),
        n=len(instances),
        sim_backend=getattr(sim_fn, "name", getattr(sim_fn, "__name__", "unknown")),
    )


def evaluate_directions(instances: Iterable[EvalInstance], scorer, sim_fn, store, cfg=DEFAULT_CONFIG) -> list[DirectionReport]:
    """One report per direction, in order of first appearance."""
    groups: dict[tuple, list] = {}
    for x in instances:
        groups.setdefault(x.direction, []).append(x)
    return [direction_report(g, scorer, sim_fn, store, cfg) for g in groups.values()]


_REQUIRED = ("source", "target", "source_style", "target_style")


def parse_instance(obj, line_number=None, styles=None) -> EvalInstance:
    if not isinstance(obj, dict):
        raise InstanceSchemaError("expected a JSON object", line_number)
    for key in _REQUIRED:
        if not isinstance(obj.get(key), str):
            raise InstanceSchemaError(f"field {key!r} missing or not a string", line_number)
    if not obj["source"].strip():
        raise InstanceSchemaError("empty source sentence", line_number)
    if styles is not None:
        for key in ("source_style", "target_style"):
            if obj[key] not in styles:
                raise InstanceSchemaError(f"unknown style {obj[key]!r}", line_number)
    amr = obj.get("amr")
    if amr is not None:
        if not isinstance(amr, str):
            raise InstanceSchemaError("field 'amr' must be a Penman string", line_number)
        try:
            amr = parse_penman(amr)
        except ValueError as exc:
            raise InstanceSchemaError(f"bad AMR: {exc}", line_number) from None
    return EvalInstance(obj["source"], obj["target"], obj["source_style"], obj["target_style"], amr)


def read_instances(path, styles=None) -> list[EvalInstance]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InstanceSchemaError(f"invalid JSON ({exc.msg})", lineno) from None
            out.append(parse_instance(obj, lineno, styles))
    if not out:
        raise InstanceSchemaError("no instances in file")
    return out


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def format_tsv(reports: Iterable[DirectionReport]) -> str:
    lines = ["\t".join(TSV_COLUMNS)]
    for r in reports:
        row = [r.label] + [_fmt(v) for v in (r.self_bleu, r.wmd, r.sim, r.style_retention, r.style_transfer, r.weighted_style_accuracy)]
        row += [str(r.n), r.sim_backend]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def report_dict(r: DirectionReport) -> dict:
    d = asdict(r)
    d["direction"] = list(r.direction)
    for k, v in d.items():
        if isinstance(v, float):
            d[k] = round(v, 6)
    return d


def format_json(reports: Iterable[DirectionReport]) -> str:
    return json.dumps([report_dict(r) for r in reports], indent=2, sort_keys=True) + "\n"

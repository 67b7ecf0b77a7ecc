"""Corpus containers and their JSONL formats."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from ..amr import AmrGraph, canonical_penman, parse_penman
from ..errors import InstanceSchemaError


@dataclass(frozen=True)
class GoldAmrCorpus:
    """Parallel sentences and gold graphs ``(s_i, A_i)``."""

    pairs: tuple

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("gold corpus is empty")
        for s, g in self.pairs:
            if not isinstance(g, AmrGraph):
                raise TypeError("gold graphs must be AmrGraph instances")

    def __len__(self):
        return len(self.pairs)

    @property
    def sentences(self) -> list[str]:
        return [s for s, _ in self.pairs]


@dataclass(frozen=True)
class MonoStyleCorpus:
    style: str
    sentences: tuple

    def __len__(self):
        return len(self.sentences)


@dataclass(frozen=True)
class SyntheticPair:
    sentence: str
    graph: AmrGraph
    style: str
    similarity: float
    index: int  # position of the gold pair this was derived from


@dataclass(frozen=True)
class ItemFailure:
    stage: str
    style: str | None
    index: int
    message: str


@dataclass(frozen=True)
class DecoderTrainSet:
    style: str
    pairs: tuple
    failures: tuple = ()
    # style label of the corpus each pair came from, for provenance audits
    provenance: tuple = ()


@dataclass
class SyntheticBatch:
    """Retained synthetic pairs per style plus bookkeeping for filter rates."""

    pairs: dict = field(default_factory=dict)
    attempted: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def all_pairs(self) -> list[SyntheticPair]:
        return [p for style in sorted(self.pairs) for p in self.pairs[style]]

    def __len__(self):
        return sum(len(v) for v in self.pairs.values())

    def filter_rate(self, style: str) -> float:
        n = self.attempted.get(style, 0)
        return 0.0 if n == 0 else 1.0 - len(self.pairs.get(style, ())) / n


def _read_jsonl(path, required: Sequence[str]):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InstanceSchemaError(f"{path}: invalid JSON ({exc.msg})", lineno) from None
            if not isinstance(obj, dict):
                raise InstanceSchemaError(f"{path}: expected a JSON object", lineno)
            for key in required:
                if not isinstance(obj.get(key), str):
                    raise InstanceSchemaError(f"{path}: field {key!r} missing or not a string", lineno)
            yield lineno, obj


def read_gold_jsonl(path) -> GoldAmrCorpus:
    pairs = []
    for lineno, obj in _read_jsonl(path, ("text", "penman")):
        try:
            pairs.append((obj["text"], parse_penman(obj["penman"])))
        except ValueError as exc:
            raise InstanceSchemaError(f"{path}: bad AMR: {exc}", lineno) from None
    return GoldAmrCorpus(tuple(pairs))


def read_mono_jsonl(path, style: str) -> MonoStyleCorpus:
    return MonoStyleCorpus(style, tuple(obj["text"] for _, obj in _read_jsonl(path, ("text",))))


def write_pairs_jsonl(path, rows: Sequence[dict]) -> None:
    with open(Path(path), "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def synthetic_rows(batch: SyntheticBatch) -> list[dict]:
    return [
        {"text": p.sentence, "penman": canonical_penman(p.graph), "style": p.style,
         "similarity": round(p.similarity, 6), "index": p.index}
        for p in batch.all_pairs()
    ]


def read_synthetic_jsonl(path, styles) -> SyntheticBatch:
    batch = SyntheticBatch({s: [] for s in styles}, {s: 0 for s in styles})
    for _, obj in _read_jsonl(path, ("text", "penman", "style")):
        batch.pairs.setdefault(obj["style"], []).append(
            SyntheticPair(obj["text"], parse_penman(obj["penman"]), obj["style"], float(obj["similarity"]), int(obj["index"]))
        )
    return batch

"""Read-only token -> vector stores and the plain-text embedding format."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Union

import numpy as np

from ..errors import EmbeddingFormatError


@dataclass(frozen=True)
class Skip:
    """Out-of-vocabulary tokens are dropped."""


@dataclass(frozen=True)
class HashFallback:
    """Out-of-vocabulary tokens get a unit vector derived from ``(token, seed)``."""

    seed: int = 0


OovPolicy = Union[Skip, HashFallback]


def hash_vector(token: str, dimension: int, seed: int = 0) -> np.ndarray:
    digest = hashlib.sha256(f"{seed}\x00{token}".encode("utf-8")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    v = rng.standard_normal(dimension)
    return v / np.linalg.norm(v)


@dataclass(frozen=True, eq=False)
class EmbeddingStore:
    dimension: int
    vectors: Mapping[str, np.ndarray] = field(default_factory=dict)
    oov_policy: OovPolicy = field(default_factory=HashFallback)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        for token, vec in self.vectors.items():
            if np.shape(vec) != (self.dimension,):
                raise ValueError(f"vector for {token!r} has shape {np.shape(vec)}, expected ({self.dimension},)")

    @classmethod
    def hashed(cls, dimension: int = 64, seed: int = 0) -> "EmbeddingStore":
        """An empty store where every token resolves through the hash fallback."""
        return cls(dimension, {}, HashFallback(seed))

    def __contains__(self, token) -> bool:
        return token in self.vectors

    def __len__(self):
        return len(self.vectors)

    def lookup(self, token: str) -> np.ndarray | None:
        """Vector for ``token``, or ``None`` when it is OOV under :class:`Skip`."""
        vec = self.vectors.get(token)
        if vec is not None:
            return vec
        if isinstance(self.oov_policy, Skip):
            return None
        cached = self._cache.get(token)
        if cached is None:
            cached = hash_vector(token, self.dimension, self.oov_policy.seed)
            self._cache[token] = cached
        return cached

    def known(self, tokens) -> list[str]:
        """``tokens`` with OOV entries removed under the current policy."""
        return [t for t in tokens if self.lookup(t) is not None]

    def matrix(self, tokens) -> np.ndarray:
        return np.stack([self.lookup(t) for t in tokens])


def load_embeddings(path, oov_policy: OovPolicy | None = None) -> EmbeddingStore:
    """Load ``token v1 ... vd`` lines, with an optional ``<count> <dim>`` header.

    Raises
    ------
    EmbeddingFormatError
        On a malformed line, inconsistent dimension, duplicate token, or a
        header whose count does not match the file. The message names the
        line number.
    """
    vectors: dict[str, np.ndarray] = {}
    dimension = None
    header_count = None
    with open(Path(path), encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p != ""]
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                header_count, dimension = int(parts[0]), int(parts[1])
                if dimension < 1:
                    raise EmbeddingFormatError("header dimension must be positive", lineno)
                continue
            token, values = parts[0], parts[1:]
            if not values:
                raise EmbeddingFormatError(f"no vector values for {token!r}", lineno)
            if dimension is None:
                dimension = len(values)
            if len(values) != dimension:
                raise EmbeddingFormatError(f"expected {dimension} values, found {len(values)}", lineno)
            try:
                vec = np.array([float(x) for x in values])
            except ValueError as exc:
                raise EmbeddingFormatError(f"non-numeric value ({exc})", lineno) from None
            if token in vectors:
                raise EmbeddingFormatError(f"duplicate token {token!r}", lineno)
            vectors[token] = vec
    if dimension is None:
        raise EmbeddingFormatError("no vectors found")
    if header_count is not None and header_count != len(vectors):
        raise EmbeddingFormatError(f"header announces {header_count} vectors, file has {len(vectors)}")
    return EmbeddingStore(dimension, vectors, oov_policy if oov_policy is not None else HashFallback())

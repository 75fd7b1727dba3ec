"""Post-training vector store: cosine queries, neighbours, analogies."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Vocabulary
from .errors import DataError
from .trainer import ModelParams

COMBINE_MODES = ("sum", "target-only", "concat")


class UnknownWordError(DataError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"word not in vocabulary: {word!r}")


class DegenerateVectorError(DataError):
    """Cosine is undefined for an all-zero vector."""


@dataclass(frozen=True)
class EmbeddingSet:
    """Immutable |V| x d matrix with word lookup.

    Stored vectors stay unnormalized so checkpoints round-trip exactly;
    queries normalize on the fly.
    """

    words: tuple[str, ...]
    vectors: np.ndarray
    combine_mode: str = "sum"
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vectors = np.ascontiguousarray(self.vectors, dtype=np.float64)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "index", {w: i for i, w in enumerate(self.words)})
        if len(self.index) != len(self.words):
            raise DataError("duplicate word in embedding set")
        if vectors.ndim != 2 or vectors.shape[0] != len(self.words):
            raise DataError("vector matrix must have one row per word")
        if not np.all(np.isfinite(vectors)):
            raise DataError("vectors contain non-finite entries")
        norms = np.linalg.norm(vectors, axis=1)
        if np.any(norms == 0):
            warnings.warn("embedding set contains all-zero rows", stacklevel=2)
        object.__setattr__(self, "_norms", norms)
        object.__setattr__(self, "_unit", None)

    def __len__(self) -> int:
        return len(self.words)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def vector(self, word: str) -> np.ndarray:
        if word not in self.index:
            raise UnknownWordError(word)
        return self.vectors[self.index[word]]

    def unit_rows(self) -> np.ndarray:
        """Row-normalized matrix, cached; all-zero rows stay zero."""
        if self._unit is None:
            safe = np.where(self._norms == 0, 1.0, self._norms)
            object.__setattr__(self, "_unit", self.vectors / safe[:, None])
        return self._unit


def export(params: ModelParams, vocab: Vocabulary, mode: str = "sum") -> EmbeddingSet:
    """Combine trained target/context vectors into an EmbeddingSet."""
    if len(vocab) != params.num_words:
        raise DataError(
            f"vocabulary size {len(vocab)} != parameter rows {params.num_words}"
        )
    if mode == "sum":
        vectors = params.w + params.wt
    elif mode == "target-only":
        vectors = params.w.copy()
    elif mode == "concat":
        vectors = np.hstack([params.w, params.wt])
    else:
        raise ValueError(f"combine mode must be one of {COMBINE_MODES}, got {mode!r}")
    return EmbeddingSet(words=vocab.words, vectors=vectors, combine_mode=mode)


def cosine(e: EmbeddingSet, a: str, b: str) -> float:
    """Cosine similarity between two stored words."""
    va, vb = e.vector(a), e.vector(b)
    na, nb = np.linalg.norm(va), np.linalg.norm(vb)
    if na == 0 or nb == 0:
        raise DegenerateVectorError(f"zero vector for {a!r}" if na == 0 else f"zero vector for {b!r}")
    return float(np.dot(va, vb) / (na * nb))


def nearest(
    e: EmbeddingSet, query: np.ndarray, k: int, exclude: frozenset[str] | set[str] = frozenset()
) -> list[tuple[str, float]]:
    """Top-k words by cosine to the query vector, ties broken by ascending id.

    Excluded and all-zero rows are never returned; the list truncates when
    fewer than k candidates remain.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    query = np.asarray(query, dtype=np.float64)
    qnorm = np.linalg.norm(query)
    if qnorm == 0:
        raise DegenerateVectorError("query vector is all zeros")
    sims = e.unit_rows() @ (query / qnorm)
    sims[e._norms == 0] = -np.inf
    for word in exclude:
        if word in e.index:
            sims[e.index[word]] = -np.inf
    order = np.lexsort((np.arange(len(sims)), -sims))
    out = []
    for idx in order[:k]:
        if sims[idx] == -np.inf:
            break
        out.append((e.words[idx], float(sims[idx])))
    return out


def solve_analogy(e: EmbeddingSet, a: str, b: str, c: str) -> str:
    """The word w maximizing cosine(v_w, v_b - v_a + v_c), excluding a, b, c."""
    query = e.vector(b) - e.vector(a) + e.vector(c)
    hits = nearest(e, query, k=1, exclude={a, b, c})
    if not hits:
        raise DataError("no candidate words left after exclusions")
    return hits[0][0]


def save_vectors(e: EmbeddingSet, path: str | Path) -> None:
    """`word v1 ... vd` per line, shortest round-trip decimals."""
    with open(path, "w", encoding="utf-8") as fh:
        for word, row in zip(e.words, e.vectors):
            fh.write(word + " " + " ".join(repr(float(v)) for v in row) + "\n")


def load_vectors(path: str | Path) -> EmbeddingSet:
    """Read a vector text file; dimension inferred from the first line."""
    words: list[str] = []
    rows: list[list[float]] = []
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if len(parts) < 2:
                raise DataError(f"{path}:{lineno}: expected 'word v1 ... vd'")
            if dim is None:
                dim = len(parts) - 1
            elif len(parts) - 1 != dim:
                raise DataError(
                    f"{path}:{lineno}: ragged row ({len(parts) - 1} values, expected {dim})"
                )
            words.append(parts[0])
            try:
                rows.append([float(v) for v in parts[1:]])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad float: {exc}") from exc
    if not words:
        raise DataError(f"{path}: empty vector file")
    return EmbeddingSet(words=tuple(words), vectors=np.array(rows), combine_mode="unknown")

"""Sparse word-word co-occurrence counting and its probability quantities.

Counting slides a window leftwards from every position: token at p pairs
with the token at p - d for each distance d = 1..window on the same
sentence segment. The pair weight is 1, or 1/d with distance weighting.

Record values are accumulated deterministically: integer pair counts are
collected per distance, then folded in ascending-distance order as
count * (1/d). Raw counts are therefore exact integers and the
distance-weighted values are reproducible bit-for-bit by any counter that
follows the same fold, which is what the test oracles do.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from .corpus import TokenIdStream
from .errors import DataError

RECORD_DTYPE = np.dtype([("target", "<u4"), ("context", "<u4"), ("value", "<f8")])


class UndefinedRowError(DataError):
    """Probability requested for a word whose row total is zero."""

    def __init__(self, word_id: int):
        self.word_id = word_id
        super().__init__(f"word id {word_id} has no co-occurrences (row total 0)")


class CooccurRecord(NamedTuple):
    target: int
    context: int
    value: float


@dataclass(frozen=True)
class CooccurSet:
    """Unique (target, context, value) triples in sorted order plus row sums."""

    targets: np.ndarray
    contexts: np.ndarray
    values: np.ndarray
    num_words: int

    def __post_init__(self):
        object.__setattr__(self, "targets", np.ascontiguousarray(self.targets, dtype=np.int32))
        object.__setattr__(self, "contexts", np.ascontiguousarray(self.contexts, dtype=np.int32))
        object.__setattr__(self, "values", np.ascontiguousarray(self.values, dtype=np.float64))
        if not (len(self.targets) == len(self.contexts) == len(self.values)):
            raise DataError("co-occurrence arrays must have equal length")
        if len(self.targets) and (
            int(self.targets.max()) >= self.num_words or int(self.contexts.max()) >= self.num_words
        ):
            raise DataError("co-occurrence id exceeds vocabulary size")
        keys = self._pack(self.targets, self.contexts)
        if np.any(np.diff(keys) <= 0):
            raise DataError("records must be unique and sorted by (target, context)")
        object.__setattr__(self, "_keys", keys)
        row_totals = np.zeros(self.num_words, dtype=np.float64)
        np.add.at(row_totals, self.targets, self.values)
        object.__setattr__(self, "_row_totals", row_totals)

    def _pack(self, targets, contexts) -> np.ndarray:
        return targets.astype(np.int64) * self.num_words + contexts.astype(np.int64)

    def __len__(self) -> int:
        return len(self.targets)

    def records(self) -> Iterator[CooccurRecord]:
        for t, c, v in zip(self.targets, self.contexts, self.values):
            yield CooccurRecord(int(t), int(c), float(v))

    @property
    def row_totals(self) -> np.ndarray:
        return self._row_totals

    def value_of(self, target: int, context: int) -> float:
        """M value for a pair, 0.0 when the pair was never observed."""
        key = target * self.num_words + context
        pos = np.searchsorted(self._keys, key)
        if pos < len(self._keys) and self._keys[pos] == key:
            return float(self.values[pos])
        return 0.0

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.num_words, self.num_words))
        dense[self.targets, self.contexts] = self.values
        return dense

    @classmethod
    def from_pairs(cls, targets, contexts, values, num_words: int) -> "CooccurSet":
        """Canonicalize possibly duplicated pairs by summing per (target, context)."""
        targets = np.asarray(targets, dtype=np.int64)
        contexts = np.asarray(contexts, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        keys = targets * num_words + contexts
        unique, inverse = np.unique(keys, return_inverse=True)
        summed = np.zeros(len(unique))
        np.add.at(summed, inverse, values)
        return cls(unique // num_words, unique % num_words, summed, num_words)


def count_cooccurrences(
    stream: TokenIdStream,
    window: int,
    symmetric: bool = True,
    distance_weighting: bool = True,
) -> CooccurSet:
    """Accumulate windowed pair weights over the id stream into a CooccurSet."""
    if window < 1:
        raise ValueError("window must be >= 1")
    ids = stream.ids.astype(np.int64)
    n = len(ids)
    num_words = stream.vocab_size
    if stream.sentence_breaks:
        segment = np.zeros(n, dtype=np.int64)
        segment[list(stream.sentence_breaks)] = 1
        segment = np.cumsum(segment)
    else:
        segment = None

    per_distance = []
    for d in range(1, window + 1):
        if d >= n:
            break
        t, c = ids[d:], ids[:-d]
        if segment is not None:
            same = segment[d:] == segment[:-d]
            t, c = t[same], c[same]
        if symmetric:
            t, c = np.concatenate([t, c]), np.concatenate([c, t])
        keys = t * num_words + c
        per_distance.append((d, *np.unique(keys, return_counts=True)))

    if not per_distance:
        empty = np.empty(0)
        return CooccurSet(empty, empty, empty, num_words)

    all_keys = np.unique(np.concatenate([k for _, k, _ in per_distance]))
    values = np.zeros(len(all_keys))
    for d, keys, counts in per_distance:  # ascending d: the canonical fold
        pos = np.searchsorted(all_keys, keys)
        values[pos] += counts * (1.0 / d) if distance_weighting else counts.astype(np.float64)
    return CooccurSet(all_keys // num_words, all_keys % num_words, values, num_words)


def merge(shards: list[CooccurSet]) -> CooccurSet:
    """Sum shard values per pair; shards must share one vocabulary."""
    if not shards:
        raise ValueError("merge needs at least one shard")
    num_words = shards[0].num_words
    if any(s.num_words != num_words for s in shards):
        raise DataError("cannot merge shards built over different vocabularies")
    return CooccurSet.from_pairs(
        np.concatenate([s.targets for s in shards]),
        np.concatenate([s.contexts for s in shards]),
        np.concatenate([s.values for s in shards]),
        num_words,
    )


def probability(cooc: CooccurSet, i: int, j: int) -> float:
    """P(j | i) = M_ij / M_i; 0.0 when the pair is absent."""
    if not 0 <= i < cooc.num_words or cooc.row_totals[i] == 0:
        raise UndefinedRowError(i)
    return cooc.value_of(i, j) / float(cooc.row_totals[i])


def probability_ratio(cooc: CooccurSet, i: int, j: int, z: int) -> float:
    """P(z|i) / P(z|j); inf when only the denominator vanishes, nan when both do."""
    p_iz = probability(cooc, i, z)
    p_jz = probability(cooc, j, z)
    if p_jz == 0.0:
        return float("nan") if p_iz == 0.0 else float("inf")
    return p_iz / p_jz


def shuffle(cooc: CooccurSet, seed: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Seed-determined permutation of the records as parallel arrays."""
    perm = permutation(len(cooc), seed)
    return cooc.targets[perm], cooc.contexts[perm], cooc.values[perm]


def permutation(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed & 0x7FFFFFFFFFFFFFFF)
    return rng.permutation(n)


def write_binary(path: str | Path, targets, contexts, values) -> None:
    """Little-endian (u4 target, u4 context, f8 value) records, no header."""
    out = np.empty(len(targets), dtype=RECORD_DTYPE)
    out["target"], out["context"], out["value"] = targets, contexts, values
    out.tofile(str(path))


def read_binary(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    size = Path(path).stat().st_size
    if size % RECORD_DTYPE.itemsize:
        raise DataError(f"{path}: size {size} is not a multiple of {RECORD_DTYPE.itemsize}")
    raw = np.fromfile(str(path), dtype=RECORD_DTYPE)
    return (
        raw["target"].astype(np.int64),
        raw["context"].astype(np.int64),
        raw["value"].astype(np.float64),
    )


def write_text(path: str | Path, cooc: CooccurSet) -> None:
    """`target context value` per line with ids as decimal integers."""
    with open(path, "w", encoding="utf-8") as fh:
        for t, c, v in zip(cooc.targets, cooc.contexts, cooc.values):
            fh.write(f"{int(t)} {int(c)} {float(v)!r}\n")


def read_text(path: str | Path, num_words: int) -> CooccurSet:
    targets, contexts, values = [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if len(parts) != 3:
                raise DataError(f"{path}:{lineno}: expected 'target context value'")
            targets.append(int(parts[0]))
            contexts.append(int(parts[1]))
            values.append(float(parts[2]))
    return CooccurSet.from_pairs(targets, contexts, values, num_words)

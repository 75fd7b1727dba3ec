"""Tokenization, frequency-ranked vocabulary, and token-id encoding."""

from __future__ import annotations

import collections
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError

DEFAULT_MIN_COUNT = 5


class DecodeError(DataError):
    """Input bytes are not valid UTF-8."""

    def __init__(self, offset: int):
        self.offset = offset
        super().__init__(f"invalid UTF-8 byte at offset {offset}")


class EmptyVocabularyError(DataError):
    """No word reached the min_count threshold."""


@dataclass(frozen=True)
class Vocabulary:
    """Words with their corpus counts, id = position.

    Ids are dense 0..|V|-1, assigned by non-increasing count; ties in
    count break by lexicographically smaller word so construction is
    deterministic.
    """

    words: tuple[str, ...]
    counts: tuple[int, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {w: i for i, w in enumerate(self.words)})
        if len(self.index) != len(self.words):
            raise DataError("duplicate word in vocabulary")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    @property
    def entries(self) -> list[tuple[str, int]]:
        return list(zip(self.words, self.counts))

    def save(self, path: str | Path) -> None:
        """Write one `word<SPACE>count` per line, id = line number."""
        with open(path, "w", encoding="utf-8") as fh:
            for word, count in zip(self.words, self.counts):
                fh.write(f"{word} {count}\n")

    @classmethod
    def load(cls, path: str | Path, strict: bool = True) -> "Vocabulary":
        """Read a vocabulary file; `strict` re-checks the ordering invariants."""
        words, counts = [], []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.split()
                if len(parts) != 2 or not parts[1].isdigit():
                    raise DataError(f"{path}:{lineno}: expected 'word count'")
                words.append(parts[0])
                counts.append(int(parts[1]))
        if not words:
            raise EmptyVocabularyError(f"{path}: empty vocabulary file")
        if strict:
            keyed = [(-c, w) for w, c in zip(words, counts)]
            if keyed != sorted(keyed):
                raise DataError(f"{path}: vocabulary not ordered by count (ties by word)")
        return cls(tuple(words), tuple(counts))


@dataclass(frozen=True)
class TokenIdStream:
    """Vocabulary ids in corpus order.

    sentence_breaks holds positions where a new sentence starts; context
    windows must not cross them. Positions are strictly increasing and
    exclude 0 and len(ids).
    """

    ids: np.ndarray
    vocab_size: int
    sentence_breaks: tuple[int, ...] = ()

    def __post_init__(self):
        ids = np.ascontiguousarray(self.ids, dtype=np.int32)
        object.__setattr__(self, "ids", ids)
        if ids.size and (ids.min() < 0 or ids.max() >= self.vocab_size):
            raise DataError("token id out of vocabulary range")
        breaks = tuple(self.sentence_breaks)
        if any(b <= 0 or b >= len(ids) for b in breaks) or list(breaks) != sorted(set(breaks)):
            raise DataError("sentence breaks must be strictly increasing interior positions")

    def __len__(self) -> int:
        return len(self.ids)


def tokenize(text: bytes | str, lowercase: bool = False) -> list[str]:
    """Split on whitespace, optionally lowercasing; empty tokens are dropped."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(exc.start) from exc
    if lowercase:
        text = text.lower()
    return text.split()


def build_vocab(tokens, min_count: int = DEFAULT_MIN_COUNT) -> Vocabulary:
    """Count tokens and keep every word occurring at least min_count times."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    freqs = collections.Counter(tokens)
    kept = [(w, c) for w, c in freqs.items() if c >= min_count]
    if not kept:
        raise EmptyVocabularyError(f"no word occurs >= {min_count} times")
    kept.sort(key=lambda wc: (-wc[1], wc[0]))
    words, counts = zip(*kept)
    return Vocabulary(words, counts)


def encode(tokens, vocab: Vocabulary, sentence_breaks=()) -> TokenIdStream:
    """Map tokens to ids, dropping out-of-vocabulary tokens.

    Sentence break positions are remapped so they stay between the same
    surviving tokens.
    """
    if len(vocab) == 0:
        raise EmptyVocabularyError("cannot encode with an empty vocabulary")
    index = vocab.index
    ids = np.fromiter(
        (index[t] for t in tokens if t in index), dtype=np.int32
    )
    breaks: tuple[int, ...] = ()
    if sentence_breaks:
        survive = np.fromiter((t in index for t in tokens), dtype=np.int64)
        prefix = np.concatenate(([0], np.cumsum(survive)))
        remapped = sorted({int(prefix[b]) for b in sentence_breaks})
        breaks = tuple(b for b in remapped if 0 < b < len(ids))
    return TokenIdStream(ids=ids, vocab_size=len(vocab), sentence_breaks=breaks)


def decode(stream: TokenIdStream, vocab: Vocabulary) -> list[str]:
    return [vocab.words[i] for i in stream.ids]


def read_corpus(
    path: str | Path, lowercase: bool = False, line_sentences: bool = False
) -> tuple[list[str], tuple[int, ...]]:
    """Read a corpus file into tokens plus sentence-break positions.

    With line_sentences, each input line is one sentence and breaks fall
    between lines; otherwise the file is a single unbroken stream.
    """
    raw = Path(path).read_bytes()
    if not line_sentences:
        return tokenize(raw, lowercase), ()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(exc.start) from exc
    tokens: list[str] = []
    breaks: list[int] = []
    for line in text.splitlines():
        line_tokens = tokenize(line, lowercase)
        if not line_tokens:
            continue
        if tokens:
            breaks.append(len(tokens))
        tokens.extend(line_tokens)
    return tokens, tuple(breaks)

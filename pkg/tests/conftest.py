"""Shared fixtures: the two-sentence toy corpus and warm jit kernels."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from glovekit import cooccur, corpus, trainer, weighting

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
TINY_CORPUS = DATA_DIR / "tiny_corpus.txt"
TINY_QUESTIONS = DATA_DIR / "tiny_questions.txt"

# (number, name, status, seconds, note) tuples appended by test_acceptance
ACCEPTANCE_RESULTS: list[tuple[int, str, str, float, str]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num, name, status, secs, note in sorted(ACCEPTANCE_RESULTS):
        suffix = f" [{note}]" if note else ""
        terminalreporter.write_line(
            f"criterion {num} {name}: {status} ({secs:.2f}s){suffix}"
        )


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the jit kernels once so per-test timings measure work, not LLVM."""
    t = np.array([0, 1], dtype=np.int32)
    c = np.array([1, 0], dtype=np.int32)
    v = np.array([2.0, 2.0])
    records = cooccur.CooccurSet.from_pairs(t, c, v, 2)
    for threads in (1, 2):
        cfg = trainer.TrainConfig(dim=2, epochs=1, weighting=weighting.PowerClip(),
                                  seed=0, threads=threads)
        trainer.train(records, cfg)


@pytest.fixture(scope="session")
def tiny_tokens():
    tokens, breaks = corpus.read_corpus(TINY_CORPUS, lowercase=False,
                                        line_sentences=True)
    return tokens, breaks


@pytest.fixture(scope="session")
def tiny_vocab(tiny_tokens):
    tokens, _ = tiny_tokens
    return corpus.build_vocab(tokens, min_count=1)


@pytest.fixture(scope="session")
def tiny_stream(tiny_tokens, tiny_vocab):
    tokens, breaks = tiny_tokens
    return corpus.encode(tokens, tiny_vocab, breaks)


@pytest.fixture(scope="session")
def tiny_cooc(tiny_stream):
    """Window-1 symmetric raw counts over the toy corpus."""
    return cooccur.count_cooccurrences(tiny_stream, window=1, symmetric=True,
                                       distance_weighting=False)

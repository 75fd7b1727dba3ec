#!/usr/bin/env python3
"""Slice a local text8 file and run the weighting-function comparison on it.

text8 is the standard 100 MB Wikipedia excerpt (one long line of lowercase
tokens). This script takes the first N megabytes, then runs `bench-compare`
with the reference protocol settings: window 15, 50 dimensions, min count 5.

Usage:
    python3 scripts/bench_text8.py --text8 /path/to/text8 \
        --questions /path/to/questions-words.txt --out-dir bench_out \
        [--size-mb 5] [--epochs 15] [--seed 0]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from glovekit.cli import main as glovekit_main


def slice_text8(src: Path, dst: Path, size_mb: float) -> None:
    budget = int(size_mb * 1024 * 1024)
    with open(src, "rb") as fin, open(dst, "wb") as fout:
        data = fin.read(budget)
        # Cut on a token boundary so the final word is not truncated.
        cut = data.rfind(b" ")
        fout.write(data if cut <= 0 else data[:cut])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--text8", type=Path, required=True)
    ap.add_argument("--questions", type=Path, required=True)
    ap.add_argument("--out-dir", type=Path, required=True)
    ap.add_argument("--size-mb", type=float, default=5.0)
    ap.add_argument("--epochs", type=int, default=15)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    corpus = args.out_dir / f"text8.first{args.size_mb:g}mb.txt"
    slice_text8(args.text8, corpus, args.size_mb)
    return glovekit_main([
        "bench-compare",
        "--corpus", str(corpus),
        "--questions", str(args.questions),
        "--out-dir", str(args.out_dir),
        "--window", "15", "--dim", "50", "--min-count", "5",
        "--epochs", str(args.epochs),
        "--seed", str(args.seed),
        "--threads", str(args.threads),
        "--force",
    ])


if __name__ == "__main__":
    sys.exit(main())

"""Subcommand front end wiring the pipeline end to end.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__, cooccur, corpus, embeddings, evaluate, trainer, weighting
from .errors import DataError, NumericError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def derive_seed(seed: int, label: str) -> int:
    """Fixed mixing so every stage draws from the single user seed."""
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "little") & 0x7FFFFFFFFFFFFFFF


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(args, command: str, inputs, outputs, primary: Path) -> Path:
    """Record resolved config, input digests, and outputs next to `primary`."""
    config = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in vars(args).items()
        if k != "func"
    }
    manifest = {
        "tool": "glovekit",
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": {str(p): _sha256(Path(p)) for p in inputs},
        "outputs": [str(p) for p in outputs],
    }
    path = Path(str(primary) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _weighting_from_args(args) -> weighting.WeightingSpec:
    if args.weighting == "power-clip":
        return weighting.PowerClip(x_max=args.x_max, alpha=args.alpha)
    if args.weighting == "exp":
        return weighting.ExpSaturating(lam=args.lam)
    return weighting.Constant()


def _add_corpus_args(p):
    p.add_argument("--corpus", required=True, help="input corpus text file")
    p.add_argument("--lowercase", action="store_true", help="lowercase tokens")
    p.add_argument(
        "--line-sentences",
        action="store_true",
        help="treat each input line as a sentence (windows do not cross lines)",
    )


def _add_weighting_args(p):
    p.add_argument(
        "--weighting",
        choices=("power-clip", "exp", "constant"),
        default="power-clip",
        help="cost-function weighting family (default: power-clip)",
    )
    p.add_argument("--x-max", type=float, default=weighting.DEFAULT_X_MAX)
    p.add_argument("--alpha", type=float, default=weighting.DEFAULT_ALPHA)
    p.add_argument("--lambda", dest="lam", type=float, default=weighting.DEFAULT_LAMBDA)


def _add_train_args(p):
    p.add_argument("--dim", type=int, default=50)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--lr", type=float, default=trainer.DEFAULT_LR)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--log-smoothing", action="store_true",
                   help="fit ln(M+1) instead of ln(M)")
    p.add_argument("--combine", choices=embeddings.COMBINE_MODES, default="sum",
                   help="how to merge target and context vectors (default: sum)")


def _check_overwrite(paths, force: bool):
    for p in paths:
        if Path(p).exists() and not force:
            raise DataError(f"refusing to overwrite {p} (use --force)")


def _load_records(path: str, num_words: int) -> cooccur.CooccurSet:
    t, c, v = cooccur.read_binary(path)
    return cooccur.CooccurSet.from_pairs(t, c, v, num_words)


def cmd_vocab(args) -> int:
    tokens, _ = corpus.read_corpus(args.corpus, args.lowercase, args.line_sentences)
    vocab = corpus.build_vocab(tokens, args.min_count)
    vocab.save(args.out)
    write_manifest(args, "vocab", [args.corpus], [args.out], Path(args.out))
    print(f"vocabulary: {len(vocab)} words (min_count={args.min_count}) -> {args.out}")
    return EXIT_OK


def cmd_cooccur(args) -> int:
    tokens, breaks = corpus.read_corpus(args.corpus, args.lowercase, args.line_sentences)
    vocab = corpus.Vocabulary.load(args.vocab)
    stream = corpus.encode(tokens, vocab, breaks)
    cooc = cooccur.count_cooccurrences(
        stream, args.window, symmetric=args.symmetric, distance_weighting=args.distance_weighting
    )
    if args.format == "bin":
        cooccur.write_binary(args.out, cooc.targets, cooc.contexts, cooc.values)
    else:
        cooccur.write_text(args.out, cooc)
    write_manifest(args, "cooccur", [args.corpus, args.vocab], [args.out], Path(args.out))
    print(f"co-occurrence: {len(cooc)} records over {len(vocab)} words -> {args.out}")
    return EXIT_OK


def cmd_shuffle(args) -> int:
    t, c, v = cooccur.read_binary(args.records)
    perm = cooccur.permutation(len(t), derive_seed(args.seed, "shuffle"))
    cooccur.write_binary(args.out, t[perm], c[perm], v[perm])
    write_manifest(args, "shuffle", [args.records], [args.out], Path(args.out))
    print(f"shuffled {len(t)} records -> {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    _check_overwrite([args.out_vectors, args.out_loss], args.force)
    vocab = corpus.Vocabulary.load(args.vocab)
    records = _load_records(args.records, len(vocab))
    config = trainer.TrainConfig(
        dim=args.dim,
        epochs=args.epochs,
        weighting=_weighting_from_args(args),
        initial_lr=args.lr,
        seed=args.seed,
        threads=args.threads,
        log_smoothing=args.log_smoothing,
    )
    params, history = trainer.train(records, config)
    emb = embeddings.export(params, vocab, args.combine)
    embeddings.save_vectors(emb, args.out_vectors)
    trainer.write_loss_csv(history, args.out_loss)
    write_manifest(
        args, "train", [args.records, args.vocab],
        [args.out_vectors, args.out_loss], Path(args.out_vectors),
    )
    print(
        f"trained {len(records)} records x {args.epochs} epochs "
        f"({weighting.spec_name(config.weighting)}); final mean cost "
        f"{history.mean_cost[-1]:.6g} -> {args.out_vectors}"
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    emb = embeddings.load_vectors(args.vectors)
    questions = evaluate.load_questions(args.questions)
    report = evaluate.evaluate(emb, questions)
    print(evaluate.format_report(report))
    if args.out_csv:
        evaluate.write_eval_csv(report, args.out_csv)
        write_manifest(args, "eval", [args.vectors, args.questions],
                       [args.out_csv], Path(args.out_csv))
    return EXIT_OK


def _read_pairs(path):
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            words = line.split()
            if not words:
                continue
            if len(words) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 words per line")
            pairs.append((words[0], words[1]))
    return pairs


def cmd_similar(args) -> int:
    emb = embeddings.load_vectors(args.vectors)
    rows = evaluate.similarity_report(emb, _read_pairs(args.pairs))
    print(evaluate.format_similarity_table(rows))
    return EXIT_OK


def cmd_analogy(args) -> int:
    emb = embeddings.load_vectors(args.vectors)
    print(embeddings.solve_analogy(emb, args.a, args.b, args.c))
    return EXIT_OK


def cmd_bench_compare(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    compare_csv = out_dir / "compare.csv"
    _check_overwrite([compare_csv], args.force)

    tokens, breaks = corpus.read_corpus(args.corpus, args.lowercase, args.line_sentences)
    vocab = corpus.build_vocab(tokens, args.min_count)
    vocab.save(out_dir / "vocab.txt")
    stream = corpus.encode(tokens, vocab, breaks)
    cooc = cooccur.count_cooccurrences(
        stream, args.window, symmetric=args.symmetric, distance_weighting=args.distance_weighting
    )
    cooccur.write_binary(out_dir / "cooccur.bin", cooc.targets, cooc.contexts, cooc.values)
    questions = evaluate.load_questions(args.questions)
    print(f"bench: |V|={len(vocab)}, {len(cooc)} records, {len(questions)} questions")

    specs = [
        weighting.ExpSaturating(lam=args.lam),
        weighting.PowerClip(x_max=args.x_max, alpha=args.alpha),
    ]
    results = {}
    for spec in specs:
        name = weighting.spec_name(spec)
        config = trainer.TrainConfig(
            dim=args.dim, epochs=args.epochs, weighting=spec, initial_lr=args.lr,
            seed=args.seed, threads=args.threads,
        )
        reports: dict[int, evaluate.EvalReport] = {}

        def snapshot(epoch, params, _reports=reports):
            if epoch == args.epochs or (args.eval_every and epoch % args.eval_every == 0):
                emb = embeddings.export(params, vocab, args.combine)
                _reports[epoch] = evaluate.evaluate(emb, questions)

        params, history = trainer.train(cooc, config, epoch_callback=snapshot)
        emb = embeddings.export(params, vocab, args.combine)
        embeddings.save_vectors(emb, out_dir / f"{name}.vectors.txt")
        trainer.write_loss_csv(history, out_dir / f"{name}.loss.csv")
        evaluate.write_eval_csv(reports[args.epochs], out_dir / f"{name}.eval.csv")
        results[name] = (history, reports)
        final = reports[args.epochs].overall
        print(f"{name}: final mean cost {history.mean_cost[-1]:.6g}, "
              f"overall accuracy {final.correct}/{final.attempted}")

    def acc_cell(report, kind):
        r = report.rollup(kind)
        return f"{r.accuracy:.6f}" if r.accuracy is not None else ""

    with open(compare_csv, "w", encoding="utf-8") as fh:
        fh.write("weighting,epoch,mean_cost,semantic_acc,syntactic_acc,overall_acc\n")
        for name, (history, reports) in results.items():
            for epoch, mean in zip(history.epochs, history.mean_cost):
                if epoch in reports:
                    cells = [acc_cell(reports[epoch], k) for k in
                             (evaluate.SEMANTIC, evaluate.SYNTACTIC, None)]
                else:
                    cells = ["", "", ""]
                fh.write(f"{name},{epoch},{mean:.12g},{','.join(cells)}\n")

    names = list(results)
    print(f"\n{'group':<12}" + "".join(f"{n:>14}" for n in names))
    for kind, label in ((evaluate.SEMANTIC, "semantic"), (evaluate.SYNTACTIC, "syntactic"), (None, "overall")):
        cells = []
        for n in names:
            r = results[n][1][args.epochs].rollup(kind)
            cells.append(f"{r.accuracy:.4f}" if r.accuracy is not None else "n/a")
        print(f"{label:<12}" + "".join(f"{c:>14}" for c in cells))

    write_manifest(
        args, "bench-compare", [args.corpus, args.questions],
        [str(compare_csv)] + [str(out_dir / f"{n}.{s}") for n in names
                              for s in ("vectors.txt", "loss.csv", "eval.csv")],
        compare_csv,
    )
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="glovekit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"glovekit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vocab", help="build a frequency-ranked vocabulary")
    _add_corpus_args(p)
    p.add_argument("--min-count", type=int, default=corpus.DEFAULT_MIN_COUNT)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("cooccur", help="count windowed co-occurrences")
    _add_corpus_args(p)
    p.add_argument("--vocab", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=15)
    p.add_argument("--symmetric", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--distance-weighting", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--format", choices=("bin", "text"), default="bin")
    p.set_defaults(func=cmd_cooccur)

    p = sub.add_parser("shuffle", help="permute a binary record file")
    p.add_argument("--records", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("train", help="train embeddings from counted records")
    p.add_argument("--records", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--out-vectors", required=True)
    p.add_argument("--out-loss", required=True)
    p.add_argument("--force", action="store_true")
    _add_weighting_args(p)
    _add_train_args(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="analogy accuracy report")
    p.add_argument("--vectors", required=True)
    p.add_argument("--questions", required=True)
    p.add_argument("--out-csv")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("similar", help="cosine table for word pairs")
    p.add_argument("--vectors", required=True)
    p.add_argument("--pairs", required=True)
    p.set_defaults(func=cmd_similar)

    p = sub.add_parser("analogy", help="predict d for a : b :: c : d")
    p.add_argument("--vectors", required=True)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.set_defaults(func=cmd_analogy)

    p = sub.add_parser(
        "bench-compare",
        help="train and evaluate once per weighting function, same seed",
    )
    _add_corpus_args(p)
    p.add_argument("--questions", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--min-count", type=int, default=corpus.DEFAULT_MIN_COUNT)
    p.add_argument("--window", type=int, default=15)
    p.add_argument("--symmetric", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--distance-weighting", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--eval-every", type=int, default=0,
                   help="evaluate analogies every N epochs (0: final epoch only)")
    p.add_argument("--force", action="store_true")
    _add_weighting_args(p)
    _add_train_args(p)
    p.set_defaults(func=cmd_bench_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"glovekit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"glovekit: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"glovekit: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

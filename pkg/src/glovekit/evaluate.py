"""Batch analogy-accuracy evaluation and similarity report tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .embeddings import EmbeddingSet, cosine, solve_analogy
from .errors import DataError

SEMANTIC = "semantic"
SYNTACTIC = "syntactic"


class QuestionParseError(DataError):
    pass


@dataclass(frozen=True)
class AnalogyQuestion:
    a: str
    b: str
    c: str
    expected: str
    category: str
    kind: str


@dataclass
class CategoryResult:
    kind: str
    attempted: int = 0
    correct: int = 0
    skipped_oov: int = 0

    @property
    def total(self) -> int:
        return self.attempted + self.skipped_oov

    @property
    def accuracy(self) -> float | None:
        """correct / attempted; None when nothing was attempted."""
        return self.correct / self.attempted if self.attempted else None

    @property
    def coverage_accuracy(self) -> float | None:
        """correct / total questions, counting OOV skips in the denominator."""
        return self.correct / self.total if self.total else None


@dataclass
class EvalReport:
    """Per-category analogy results plus semantic/syntactic/overall rollups."""

    categories: dict[str, CategoryResult] = field(default_factory=dict)

    def rollup(self, kind: str | None = None) -> CategoryResult:
        agg = CategoryResult(kind=kind or "overall")
        for result in self.categories.values():
            if kind is None or result.kind == kind:
                agg.attempted += result.attempted
                agg.correct += result.correct
                agg.skipped_oov += result.skipped_oov
        return agg

    @property
    def semantic(self) -> CategoryResult:
        return self.rollup(SEMANTIC)

    @property
    def syntactic(self) -> CategoryResult:
        return self.rollup(SYNTACTIC)

    @property
    def overall(self) -> CategoryResult:
        return self.rollup(None)


def question_kind(category: str) -> str:
    return SYNTACTIC if category.startswith("gram") else SEMANTIC


def load_questions(path: str | Path) -> list[AnalogyQuestion]:
    """Parse an analogy question file.

    Lines starting with `: ` open a section; every other nonblank line is
    four whitespace-separated words (a b c expected), lowercased here to
    match the vocabulary policy. Section names with a `gram` prefix count
    as syntactic, everything else as semantic.
    """
    questions: list[AnalogyQuestion] = []
    category = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.startswith(":"):
                category = line[1:].strip()
                if not category:
                    raise QuestionParseError(f"{path}:{lineno}: empty section name")
                continue
            words = line.lower().split()
            if not words:
                continue
            if category is None:
                raise QuestionParseError(f"{path}:{lineno}: question before any section header")
            if len(words) != 4:
                raise QuestionParseError(
                    f"{path}:{lineno}: expected 4 words, got {len(words)}"
                )
            questions.append(
                AnalogyQuestion(*words, category=category, kind=question_kind(category))
            )
    return questions


def evaluate(e: EmbeddingSet, questions: list[AnalogyQuestion]) -> EvalReport:
    """Score 3CosAdd predictions against expected words, skipping OOV questions."""
    report = EvalReport()
    for q in questions:
        result = report.categories.setdefault(q.category, CategoryResult(kind=q.kind))
        if any(w not in e.index for w in (q.a, q.b, q.c, q.expected)):
            result.skipped_oov += 1
            continue
        result.attempted += 1
        if solve_analogy(e, q.a, q.b, q.c) == q.expected:
            result.correct += 1
    return report


def similarity_report(
    e: EmbeddingSet, pairs: list[tuple[str, str]]
) -> list[tuple[str, str, float | None]]:
    """Cosine per word pair; None marks rows with an out-of-vocabulary word."""
    rows = []
    for a, b in pairs:
        if a in e.index and b in e.index:
            rows.append((a, b, cosine(e, a, b)))
        else:
            rows.append((a, b, None))
    return rows


def format_similarity_table(rows) -> str:
    width = max((len(a) + len(b) for a, b, _ in rows), default=8) + 2
    lines = []
    for a, b, value in rows:
        cell = f"{value:.6f}" if value is not None else "OOV"
        lines.append(f"{a + ' ' + b:<{width}} {cell}")
    return "\n".join(lines)


def _accuracy_cell(value: float | None) -> str:
    return f"{value:.6f}" if value is not None else ""


def write_eval_csv(report: EvalReport, path: str | Path) -> None:
    """One row per category: category,kind,attempted,correct,skipped,accuracy."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("category,kind,attempted,correct,skipped,accuracy\n")
        for name, r in report.categories.items():
            fh.write(
                f"{name},{r.kind},{r.attempted},{r.correct},{r.skipped_oov},"
                f"{_accuracy_cell(r.accuracy)}\n"
            )


def format_report(report: EvalReport) -> str:
    """Human-readable table: categories, then semantic/syntactic/overall rollups."""
    lines = [f"{'category':<40} {'kind':<10} {'att':>6} {'ok':>6} {'skip':>6} {'acc':>9} {'acc/all':>9}"]

    def row(name, r):
        return (
            f"{name:<40} {r.kind:<10} {r.attempted:>6} {r.correct:>6} {r.skipped_oov:>6} "
            f"{_accuracy_cell(r.accuracy):>9} {_accuracy_cell(r.coverage_accuracy):>9}"
        )

    for name, r in report.categories.items():
        lines.append(row(name, r))
    lines.append("-" * len(lines[0]))
    for name, r in (
        (SEMANTIC, report.semantic),
        (SYNTACTIC, report.syntactic),
        ("overall", report.overall),
    ):
        lines.append(row(name, r))
    return "\n".join(lines)

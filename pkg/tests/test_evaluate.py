import numpy as np
import pytest

from glovekit.embeddings import EmbeddingSet
from glovekit.evaluate import (
    SEMANTIC,
    SYNTACTIC,
    AnalogyQuestion,
    CategoryResult,
    QuestionParseError,
    evaluate,
    format_report,
    format_similarity_table,
    load_questions,
    question_kind,
    similarity_report,
    write_eval_csv,
)


@pytest.fixture
def offset_embeddings():
    """Two clean analogy families plus one distractor word."""
    words = ("king", "queen", "man", "woman", "walk", "walked",
             "jump", "jumped", "pebble")
    rng = np.random.default_rng(7)
    vecs = rng.normal(size=(9, 8))
    gender = np.zeros(8)
    gender[0] = 3.0
    tense = np.zeros(8)
    tense[1] = 3.0
    vecs[1] = vecs[0] + gender
    vecs[3] = vecs[2] + gender
    vecs[5] = vecs[4] + tense
    vecs[7] = vecs[6] + tense
    return EmbeddingSet(words=words, vectors=vecs)


def q(a, b, c, d, category="capital-common-countries"):
    return AnalogyQuestion(a=a, b=b, c=c, expected=d, category=category,
                           kind=question_kind(category))


class TestQuestionKind:
    def test_gram_prefix_is_syntactic(self):
        assert question_kind("gram2-opposite") == SYNTACTIC
        assert question_kind("gram9-plural-verbs") == SYNTACTIC

    def test_everything_else_is_semantic(self):
        assert question_kind("capital-world") == SEMANTIC
        assert question_kind("currency") == SEMANTIC
        assert question_kind("family") == SEMANTIC


class TestLoadQuestions:
    def test_parses_sections_and_lowercases(self, tmp_path):
        path = tmp_path / "q.txt"
        path.write_text(
            ": capital-common-countries\n"
            "Athens Greece Baghdad Iraq\n"
            "\n"
            ": gram3-comparative\n"
            "big bigger cold colder\n"
        )
        questions = load_questions(path)
        assert len(questions) == 2
        first, second = questions
        assert (first.a, first.b, first.c, first.expected) == (
            "athens", "greece", "baghdad", "iraq")
        assert first.category == "capital-common-countries"
        assert first.kind == SEMANTIC
        assert second.kind == SYNTACTIC

    def test_fixture_file_parses(self):
        from .conftest import TINY_QUESTIONS
        questions = load_questions(TINY_QUESTIONS)
        assert len(questions) == 6
        assert {q.kind for q in questions} == {SEMANTIC, SYNTACTIC}

    def test_question_before_any_header_rejected(self, tmp_path):
        path = tmp_path / "q.txt"
        path.write_text("athens greece baghdad iraq\n")
        with pytest.raises(QuestionParseError, match="q.txt:1"):
            load_questions(path)

    def test_wrong_word_count_rejected(self, tmp_path):
        path = tmp_path / "q.txt"
        path.write_text(": family\nboy girl brother\n")
        with pytest.raises(QuestionParseError, match="q.txt:2"):
            load_questions(path)


class TestEvaluate:
    def test_perfect_families_score_one(self, offset_embeddings):
        questions = [
            q("king", "queen", "man", "woman", "family"),
            q("man", "woman", "king", "queen", "family"),
            q("walk", "walked", "jump", "jumped", "gram7-past-tense"),
            q("jump", "jumped", "walk", "walked", "gram7-past-tense"),
        ]
        report = evaluate(offset_embeddings, questions)
        fam = report.categories["family"]
        past = report.categories["gram7-past-tense"]
        assert fam.attempted == 2 and fam.correct == 2
        assert past.attempted == 2 and past.correct == 2
        assert report.semantic.accuracy == 1.0
        assert report.syntactic.accuracy == 1.0
        assert report.overall.accuracy == 1.0

    def test_wrong_expectation_counts_as_incorrect(self, offset_embeddings):
        report = evaluate(offset_embeddings, [
            q("king", "queen", "man", "pebble", "family"),
        ])
        fam = report.categories["family"]
        assert fam.attempted == 1 and fam.correct == 0
        assert fam.accuracy == 0.0

    def test_any_oov_word_skips_the_question(self, offset_embeddings):
        report = evaluate(offset_embeddings, [
            q("king", "queen", "man", "woman", "family"),
            q("king", "queen", "ghost", "woman", "family"),
            q("king", "queen", "man", "ghost", "family"),
        ])
        fam = report.categories["family"]
        assert fam.attempted == 1
        assert fam.skipped_oov == 2
        assert fam.total == 3
        assert fam.accuracy == 1.0
        assert fam.coverage_accuracy == pytest.approx(1 / 3)

    def test_empty_category_has_undefined_accuracy(self, offset_embeddings):
        report = evaluate(offset_embeddings, [
            q("king", "queen", "ghost", "woman", "family"),
        ])
        fam = report.categories["family"]
        assert fam.accuracy is None
        assert fam.coverage_accuracy == 0.0
        assert report.overall.accuracy is None

    def test_rollups_partition_by_kind(self, offset_embeddings):
        report = evaluate(offset_embeddings, [
            q("king", "queen", "man", "woman", "family"),
            q("walk", "walked", "jump", "pebble", "gram7-past-tense"),
        ])
        assert report.semantic.attempted == 1 and report.semantic.correct == 1
        assert report.syntactic.attempted == 1 and report.syntactic.correct == 0
        assert report.overall.attempted == 2 and report.overall.correct == 1
        assert report.overall.accuracy == 0.5


class TestSimilarityReport:
    def test_rows_and_oov_markers(self, offset_embeddings):
        rows = similarity_report(offset_embeddings, [
            ("king", "queen"), ("king", "ghost")])
        assert rows[0][0] == "king" and rows[0][1] == "queen"
        assert isinstance(rows[0][2], float)
        assert rows[1][2] is None

    def test_table_formatting(self, offset_embeddings):
        rows = similarity_report(offset_embeddings, [
            ("king", "queen"), ("king", "ghost")])
        table = format_similarity_table(rows)
        lines = table.splitlines()
        assert any("OOV" in line for line in lines)
        # cosine printed with 6 decimals
        import re
        assert re.search(r"king\s+queen\s+-?\d\.\d{6}", table)


class TestEvalCsv:
    def test_layout_and_empty_accuracy_cell(self, offset_embeddings, tmp_path):
        report = evaluate(offset_embeddings, [
            q("king", "queen", "man", "woman", "family"),
            q("king", "queen", "ghost", "woman", "currency"),
        ])
        path = tmp_path / "eval.csv"
        write_eval_csv(report, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "category,kind,attempted,correct,skipped,accuracy"
        body = {line.split(",")[0]: line for line in lines[1:]}
        assert body["family"] == "family,semantic,1,1,0,1.000000"
        assert body["currency"].endswith(",0,0,1,")  # undefined accuracy is empty

    def test_format_report_mentions_both_conventions(self, offset_embeddings):
        report = evaluate(offset_embeddings, [
            q("king", "queen", "man", "woman", "family")])
        text = format_report(report)
        assert "family" in text
        assert "semantic" in text and "syntactic" in text and "overall" in text
        assert "acc/all" in text

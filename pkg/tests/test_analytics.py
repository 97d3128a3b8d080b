import random
from fractions import Fraction

import pytest

from sdgclassify.analytics import (
    evaluate,
    export_summary,
    load_truth,
    render_eval_csv,
    render_summary_csv,
    summarize,
)
from sdgclassify.engine import ClassificationResult, SdgMatch


def result(sdg_ids, top_n=3):
    entries = tuple(
        SdgMatch(s, 2, 4, Fraction(1, 2), (f"q{s}.a", f"q{s}.b")) for s in sdg_ids
    )
    return ClassificationResult(
        entries=entries, no_recognition=not sdg_ids, library_version="t@0", top_n=top_n
    )


class TestSummarize:
    def test_rank1_counting(self):
        summary = summarize([result([1]), result([1]), result([4])])
        assert summary.rank_counts[1][0] == 2
        assert summary.rank_counts[4][0] == 1
        assert summary.total == 3

    def test_no_recognition_counted(self):
        summary = summarize([result([])])
        assert summary.no_recognition == 1

    def test_rank1_plus_no_recognition_accounts_for_all(self):
        results = [result([1, 4]), result([]), result([5]), result([4, 5, 1])]
        summary = summarize(results)
        top1_total = sum(summary.rank_counts[s][0] for s in range(1, 18))
        assert top1_total + summary.no_recognition == summary.total

    def test_cumulative_counts_non_decreasing(self):
        summary = summarize([result([1, 4, 5]), result([4, 1]), result([5])])
        for s in range(1, 18):
            cum = summary.cumulative[s]
            assert all(cum[i] <= cum[i + 1] for i in range(len(cum) - 1))

    def test_order_invariance(self):
        results = [result([1, 4]), result([5]), result([]), result([4])]
        shuffled = results[::-1]
        a, b = summarize(results), summarize(shuffled)
        assert a.rank_counts == b.rank_counts
        assert a.no_recognition == b.no_recognition

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            summarize([])


class TestEvaluate:
    def test_correct_at_k_definition(self):
        results = [result([4, 1], top_n=5), result([5, 4, 2], top_n=5)]
        table = evaluate(results, {0: 4, 1: 4}, k_max=5)
        row = table.rows[0]
        assert row.label == "SDG 4"
        assert row.correct_at == [1, 2, 2, 2, 2]
        assert row.accuracy(1) == 50.0
        assert row.accuracy(2) == 100.0

    def test_accuracy_non_decreasing(self):
        rng = random.Random(5)
        results = []
        truth = {}
        for i in range(60):
            ranked = rng.sample(range(1, 18), rng.randint(0, 6))
            results.append(result(ranked, top_n=17))
            truth[i] = rng.randint(1, 17)
        table = evaluate(results, truth, k_max=17)
        for row in table.rows:
            for k in range(1, 17):
                assert row.accuracy(k) <= row.accuracy(k + 1)

    def test_truth_found_or_scored_zero(self):
        results = [result([3, 9], top_n=17), result([], top_n=17)]
        table = evaluate(results, {0: 9, 1: 9}, k_max=17)
        row = table.rows[0]
        assert row.correct_at[16] + 1 == row.total  # row 1's truth never recognized

    def test_unknown_row_rejected(self):
        with pytest.raises(ValueError):
            evaluate([result([1])], {5: 1}, k_max=1)

    def test_truncated_results_rejected(self):
        with pytest.raises(ValueError):
            evaluate([result([1], top_n=2)], {0: 1}, k_max=5)

    def test_overall_row_sums(self):
        results = [result([1], top_n=3), result([4], top_n=3), result([4, 1], top_n=3)]
        table = evaluate(results, {0: 1, 1: 4, 2: 1}, k_max=3)
        overall = table.overall
        assert overall.total == 3
        assert overall.correct_at == [
            sum(r.correct_at[k] for r in table.rows[:-1]) for k in range(3)
        ]


class TestExport:
    def test_summary_csv_columns(self):
        summary = summarize([result([1, 4, 5])])
        text = render_summary_csv(summary)
        lines = text.splitlines()
        assert lines[0] == "sdg_id,rank1_count,top2_count,top3_count"
        assert len(lines) == 18
        assert lines[1] == "1,1,1,1"

    def test_eval_csv_matches_reference_layout(self):
        results = [result([1], top_n=5)]
        table = evaluate(results, {0: 1}, k_max=5)
        lines = render_eval_csv(table).splitlines()
        assert lines[0] == (
            "SDG,Total Papers,Correct @ Top-1,Correct @ Top-2,Correct @ Top-3,"
            "Correct @ Top-4,Correct @ Top-5,No Recognition,"
            "Accuracy @ Top-1 (%),Accuracy @ Top-2 (%),Accuracy @ Top-5 (%)"
        )
        assert lines[-1].startswith("Overall,")

    def test_percentages_trim_trailing_zeros(self):
        results = [result([1], top_n=5)] * 3
        table = evaluate(results, {0: 1, 1: 1, 2: 4}, k_max=5)
        text = render_eval_csv(table)
        assert "66.67" in text  # overall: 2 of 3 correct
        assert "100," in text or text.rstrip().endswith("100")

    def test_export_deterministic(self, tmp_path):
        summary = summarize([result([1, 4])])
        one, two = tmp_path / "a.csv", tmp_path / "b.csv"
        export_summary(summary, one)
        export_summary(summary, two)
        assert one.read_bytes() == two.read_bytes()

    def test_empty_export_rejected(self, tmp_path):
        from sdgclassify.analytics import EvalTable

        with pytest.raises(ValueError):
            export_summary(EvalTable(k_max=1, rows=[]), tmp_path / "x.csv")
        assert not (tmp_path / "x.csv").exists()

    def test_text_format(self, tmp_path):
        summary = summarize([result([2])])
        path = tmp_path / "s.txt"
        export_summary(summary, path, fmt="text")
        assert "papers: 1" in path.read_text()


class TestLoadTruth:
    def test_row_index_format(self, tmp_path):
        path = tmp_path / "truth.csv"
        path.write_text("row_index,sdg_id\n0,1\n2,4\n", encoding="utf-8")
        assert load_truth(path) == {0: 1, 2: 4}

    def test_id_column_matched_against_passthrough(self, tmp_path):
        from sdgclassify.ingestion import read_batch

        data = tmp_path / "in.csv"
        data.write_text("Title,Abstract,DOI\nt1,a1,10.1/a\nt2,a2,10.1/b\n", encoding="utf-8")
        records, _ = read_batch(data)
        path = tmp_path / "truth.csv"
        path.write_text("DOI,sdg_id\n10.1/b,5\n", encoding="utf-8")
        assert load_truth(path, records) == {1: 5}

    def test_missing_sdg_column(self, tmp_path):
        path = tmp_path / "truth.csv"
        path.write_text("row,label\n0,1\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_truth(path)

import math

from gramweave.chart import SERIES, render_accuracy_chart, summarize
from gramweave.pipeline import ReportRow


def rows_fixture():
    return [
        ReportRow("alpha", "CE", 1, 0.60, 0.35),
        ReportRow("alpha", "CE", 3, 0.58, 0.33),
        ReportRow("alpha", "RE", 1, 0.52, 0.26),
        ReportRow("alpha", "RE", 3, 0.54, float("nan")),
        ReportRow("beta", "CE", 1, 0.67, 0.36),
        ReportRow("beta", "RE", 1, 0.47, 0.23),
    ]


class TestSummarize:
    def test_averages_over_n_as_percent(self):
        summary = summarize(rows_fixture())
        assert summary["alpha"]["CE-Train"] == (60.0 + 58.0) / 2
        assert summary["alpha"]["CE-Test"] == (35.0 + 33.0) / 2

    def test_nan_entries_skipped(self):
        summary = summarize(rows_fixture())
        assert summary["alpha"]["RE-Test"] == 26.0  # the NaN n=3 row is dropped

    def test_all_series_present(self):
        summary = summarize(rows_fixture())
        for corpus in ("alpha", "beta"):
            assert set(summary[corpus]) == set(SERIES)


class TestRender:
    def test_emits_grouped_svg(self, tmp_path):
        out = tmp_path / "chart.svg"
        render_accuracy_chart(rows_fixture(), out)
        body = out.read_text()
        assert body.startswith("<svg")
        assert body.rstrip().endswith("</svg>")
        for series in SERIES:
            assert series in body
        for corpus in ("alpha", "beta"):
            assert corpus in body
        # 2 corpora x 4 series bars + 4 legend swatches + background
        assert body.count("<rect") == 2 * 4 + 4 + 1

    def test_render_is_deterministic(self, tmp_path):
        render_accuracy_chart(rows_fixture(), tmp_path / "a.svg")
        render_accuracy_chart(rows_fixture(), tmp_path / "b.svg")
        assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()

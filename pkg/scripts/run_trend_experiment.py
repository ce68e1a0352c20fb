#!/usr/bin/env python3
"""CE-vs-RE comparison on the bundled fixed corpus: trains both
embedding sources across n in {1, 2, 3, 5, 10}, prints the report with
per-source mean test accuracy, and renders the grouped bar chart.

This mirrors the soft acceptance check in tests/test_acceptance.py
(same config); expect roughly 5-10 minutes on one CPU core.

Usage: python scripts/run_trend_experiment.py [--out runs/trend]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from gramweave.chart import render_accuracy_chart
from gramweave.gcn import GcnTrainConfig
from gramweave.lstm import LstmTrainConfig
from gramweave.pipeline import PipelineConfig, format_report, run_pipeline

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="runs/trend")
    parser.add_argument("--corpus", default=str(ROOT / "data" / "trend_corpus.txt"))
    args = parser.parse_args()

    config = PipelineConfig(
        corpus_path=args.corpus,
        out_dir=args.out,
        ngram_sizes=[1, 2, 3, 5, 10],
        gcn=GcnTrainConfig(epochs=200),
        lstm=LstmTrainConfig(lr=0.002, epochs=12, batch_size=500, d_h=128),
        embedding_source="both",
        seed=17,
    )
    t0 = time.time()
    rows = run_pipeline(config)
    print(format_report(rows))

    ce = [r.test_acc for r in rows if r.source == "CE"]
    re_ = [r.test_acc for r in rows if r.source == "RE"]
    print(f"\nmean test accuracy: CE {sum(ce) / len(ce):.4f}  RE {sum(re_) / len(re_):.4f}")
    print(f"elapsed: {time.time() - t0:.0f}s")

    chart_path = Path(args.out) / "accuracy.svg"
    render_accuracy_chart(rows, chart_path)
    print(f"chart: {chart_path}")


if __name__ == "__main__":
    main()

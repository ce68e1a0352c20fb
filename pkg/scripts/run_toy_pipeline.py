#!/usr/bin/env python3
"""End-to-end demo on the two-sentence toy corpus: builds the graph,
trains both embedding sources, overfits the n=3 predictor, prints the
report and a few live suggestions, and leaves a checkpoint behind.

Usage: python scripts/run_toy_pipeline.py [--out runs/toy]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from gramweave.gcn import GcnTrainConfig
from gramweave.lstm import LstmTrainConfig
from gramweave.pipeline import PipelineConfig, format_report, load_bundle, run_pipeline

TOY_TEXT = "the weather is good. the weather forecast is sunny."


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="runs/toy")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus_path = out / "toy_corpus.txt"
    corpus_path.write_text(TOY_TEXT, encoding="utf-8")

    config = PipelineConfig(
        corpus_path=str(corpus_path),
        out_dir=str(out),
        ngram_sizes=[3],
        gcn=GcnTrainConfig(epochs=200, d0=16, d_h=16, d_out=16),
        lstm=LstmTrainConfig(lr=0.01, epochs=300, d_h=32),
        embedding_source="both",
        seed=7,
    )
    rows = run_pipeline(config)
    print(format_report(rows))

    bundle = load_bundle(out, source="CE", n=3)
    print("\nsample suggestions (CE, n=3):")
    for context in ("the weather", "the weather is", "weather forecast"):
        suggestions = bundle.suggest(context, 3)
        rendered = "  ".join(f"{tok} ({p:.3f})" for tok, p in suggestions)
        print(f"  {context!r} -> {rendered}")
    print(f"\ncheckpoint: {out}")
    print(f"serve it:   gramweave serve --checkpoint {out} --port 8080")


if __name__ == "__main__":
    main()

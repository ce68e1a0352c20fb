"""Static SVG bar charts of the evaluation report.

Groups accuracies per corpus into the four-bar RE-Train / RE-Test /
CE-Train / CE-Test layout, averaging over the trained n-gram sizes.
Pure string templating so the output is byte-deterministic.
"""

from __future__ import annotations

import math
from pathlib import Path

SERIES = ("RE-Train", "RE-Test", "CE-Train", "CE-Test")
_COLORS = {
    "RE-Train": "#2ca02c",
    "RE-Test": "#d62728",
    "CE-Train": "#ff7f0e",
    "CE-Test": "#17becf",
}


def summarize(rows: list) -> dict:
    """{corpus: {series: mean accuracy %}} averaged over n (NaNs skipped)."""
    acc: dict = {}
    for r in rows:
        per_corpus = acc.setdefault(r.corpus, {s: [] for s in SERIES})
        if not math.isnan(r.train_acc):
            per_corpus[f"{r.source}-Train"].append(r.train_acc * 100.0)
        if not math.isnan(r.test_acc):
            per_corpus[f"{r.source}-Test"].append(r.test_acc * 100.0)
    return {
        corpus: {
            series: (sum(vals) / len(vals) if vals else 0.0)
            for series, vals in per_corpus.items()
        }
        for corpus, per_corpus in acc.items()
    }


def render_accuracy_chart(rows: list, out_path, title: str = "Next-word prediction accuracy") -> None:
    summary = summarize(rows)
    corpora = sorted(summary)
    width, height = 720, 420
    margin_l, margin_r, margin_t, margin_b = 70, 160, 50, 60
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b
    group_w = plot_w / max(len(corpora), 1)
    bar_w = group_w / (len(SERIES) + 1)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16">{title}</text>',
    ]
    # y axis with 0..100% gridlines
    for tick in range(0, 101, 20):
        y = margin_t + plot_h * (1 - tick / 100.0)
        parts.append(
            f'<line x1="{margin_l}" y1="{y:.1f}" x2="{margin_l + plot_w}" y2="{y:.1f}" '
            f'stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{margin_l - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="11">{tick}</text>'
        )
    parts.append(
        f'<text x="18" y="{margin_t + plot_h / 2:.1f}" font-size="12" '
        f'transform="rotate(-90 18 {margin_t + plot_h / 2:.1f})" '
        f'text-anchor="middle">Accuracy (%)</text>'
    )
    for gi, corpus in enumerate(corpora):
        gx = margin_l + gi * group_w
        for si, series in enumerate(SERIES):
            value = summary[corpus][series]
            bh = plot_h * min(max(value, 0.0), 100.0) / 100.0
            x = gx + (si + 0.5) * bar_w
            y = margin_t + plot_h - bh
            parts.append(
                f'<rect x="{x:.1f}" y="{y:.1f}" width="{bar_w:.1f}" height="{bh:.1f}" '
                f'fill="{_COLORS[series]}"/>'
            )
            parts.append(
                f'<text x="{x + bar_w / 2:.1f}" y="{y - 3:.1f}" text-anchor="middle" '
                f'font-size="9">{value:.1f}</text>'
            )
        parts.append(
            f'<text x="{gx + group_w / 2:.1f}" y="{margin_t + plot_h + 18:.1f}" '
            f'text-anchor="middle" font-size="12">{corpus}</text>'
        )
    parts.append(
        f'<text x="{width / 2:.1f}" y="{height - 16}" text-anchor="middle" '
        f'font-size="12">Text corpora</text>'
    )
    legend_x = margin_l + plot_w + 16
    for si, series in enumerate(SERIES):
        ly = margin_t + 10 + si * 22
        parts.append(
            f'<rect x="{legend_x}" y="{ly}" width="14" height="14" fill="{_COLORS[series]}"/>'
        )
        parts.append(
            f'<text x="{legend_x + 20}" y="{ly + 11}" font-size="11">{series}</text>'
        )
    parts.append("</svg>")
    Path(out_path).write_text("\n".join(parts) + "\n", encoding="utf-8")

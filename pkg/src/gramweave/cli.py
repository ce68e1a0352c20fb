"""Command-line interface.

Subcommands: fetch, ingest, train, evaluate, suggest, serve, chart.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import chart as chart_mod
from . import checkpoint as ckpt
from .cograph import build_graph, write_edges_tsv
from .config import DEFAULT_CONFIG_TEXT, parse_config_file
from .fetch import default_cache_dir, fetch_articles
from .pipeline import (
    PipelineError,
    evaluate_checkpoint,
    format_report,
    load_bundle,
    read_report_csv,
    run_pipeline,
)
from .server import make_server
from .textprep import RawDocument, build_vocabulary, corpus_stats, prepare_corpus, write_vocabulary_tsv

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="gramweave", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fetch", help="download and cache Wikipedia articles for a keyword")
    p.add_argument("--keyword", required=True)
    p.add_argument("--max", type=int, default=1000, dest="max_articles")
    p.add_argument("--cache", default=None, help="cache directory (default: $GRAMWEAVE_CACHE)")
    p.add_argument("--out", default=None, help="also write the concatenated corpus here")

    p = sub.add_parser("ingest", help="clean a plain-text corpus and report its statistics")
    p.add_argument("--input", required=True)
    p.add_argument("--out", default=None, help="directory for vocab.tsv / edges.tsv")

    p = sub.add_parser("train", help="run the full pipeline from a config file")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None, help="checkpoint directory (overrides config)")
    p.add_argument("--write-default-config", metavar="PATH", default=None,
                   help="write the annotated default config and exit")

    p = sub.add_parser("evaluate", help="re-evaluate the models stored in a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--corpus", default=None, help="corpus file (default: path recorded in manifest)")

    p = sub.add_parser("suggest", help="interactive next-word suggestions from stdin")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--source", choices=("CE", "RE"), default=None)
    p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("serve", help="HTTP suggestion service")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--source", choices=("CE", "RE"), default=None)
    p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("chart", help="render a report CSV as an SVG bar chart")
    p.add_argument("--report", required=True)
    p.add_argument("--out", required=True)
    return parser


def _cmd_fetch(args) -> int:
    cache = Path(args.cache) if args.cache else default_cache_dir()
    doc = fetch_articles(args.keyword, args.max_articles, cache)
    print(f"fetched corpus for {args.keyword!r}: {len(doc.text)} characters (cache: {cache})")
    if args.out:
        Path(args.out).write_text(doc.text, encoding="utf-8")
        print(f"wrote {args.out}")
    return 0


def _cmd_ingest(args) -> int:
    path = Path(args.input)
    raw = RawDocument(text=path.read_text(encoding="utf-8"), source_label=path.stem)
    corpus = prepare_corpus(raw)
    stats = corpus_stats(corpus)
    print(f"corpus:         {raw.source_label}")
    print(f"words:          {stats.n_words}")
    print(f"unique words:   {stats.n_unique_words}")
    print(f"sentences:      {stats.n_sentences}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        vocab = build_vocabulary(corpus)
        write_vocabulary_tsv(vocab, out / "vocab.tsv")
        write_edges_tsv(build_graph(corpus, vocab), vocab, out / "edges.tsv")
        print(f"wrote {out / 'vocab.tsv'} and {out / 'edges.tsv'}")
    return 0


def _cmd_train(args, parser: _Parser) -> int:
    if args.write_default_config:
        Path(args.write_default_config).write_text(DEFAULT_CONFIG_TEXT, encoding="utf-8")
        print(f"wrote {args.write_default_config}")
        return 0
    if not args.config:
        parser.error("train requires --config (or --write-default-config)")
    config = parse_config_file(args.config)
    if args.out:
        config.out_dir = args.out
    if config.out_dir is None:
        parser.error("no output directory: set `out` in the config or pass --out")
    corpus = None
    if config.corpus_path is None and config.keyword:
        corpus = fetch_articles(config.keyword, 1000)
    rows = run_pipeline(config, corpus=corpus)
    print(format_report(rows))
    print(f"\ncheckpoint written to {config.out_dir}")
    return 0


def _cmd_evaluate(args) -> int:
    rows = evaluate_checkpoint(args.checkpoint, args.corpus)
    print(format_report(rows))
    return 0


def _cmd_suggest(args) -> int:
    if args.k < 1:
        raise ValueError("-k must be >= 1")
    bundle = load_bundle(args.checkpoint, source=args.source, n=args.n)
    print(
        f"model: {bundle.source} embeddings, n={bundle.n}, "
        f"vocab={bundle.model_info['vocab_size']} (blank line exits)",
        file=sys.stderr,
    )
    for line in sys.stdin:
        text = line.rstrip("\n")
        if not text.strip():
            break
        try:
            suggestions = bundle.suggest(text, args.k)
        except ValueError as e:
            print(f"error: {e}")
            continue
        print("  ".join(f"{token} ({prob:.3f})" for token, prob in suggestions))
    return 0


def _cmd_serve(args) -> int:
    server = make_server(args.checkpoint, host=args.host, port=args.port,
                         source=args.source, n=args.n, verbose=True)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port} (POST /suggest, GET /health, GET /model)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _cmd_chart(args) -> int:
    rows = read_report_csv(args.report)
    if not rows:
        raise ValueError(f"report {args.report} contains no rows")
    chart_mod.render_accuracy_chart(rows, args.out)
    print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fetch":
            return _cmd_fetch(args)
        if args.command == "ingest":
            return _cmd_ingest(args)
        if args.command == "train":
            return _cmd_train(args, parser)
        if args.command == "evaluate":
            return _cmd_evaluate(args)
        if args.command == "suggest":
            return _cmd_suggest(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "chart":
            return _cmd_chart(args)
        parser.error(f"unknown command {args.command!r}")
    except (OSError, ValueError, RuntimeError, ckpt.CheckpointError, PipelineError) as e:
        print(f"gramweave: {e}", file=sys.stderr)
        return DATA_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""End-to-end orchestration: corpus -> graph -> embeddings -> per-n LSTM
training -> evaluation report, with every artifact checkpointed.

(corpus bytes, config, seed) fully determine every emitted number: the
graph encoder trains with the pipeline seed, the RE table uses the same
seed, and each n-gram size derives its own stream as seed + n, so sizes
are independent and could train in parallel without changing results.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from . import checkpoint as ckpt
from .cograph import build_graph, adjacency, write_edges_tsv
from .gcn import GcnTrainConfig, export_embeddings, train_gcn
from .lstm import LstmParams, LstmTrainConfig, evaluate, predict_next, train
from .ngram import EmbeddingTable, build_ngrams, random_embeddings, split_dataset
from .textprep import (
    RawDocument,
    build_vocabulary,
    corpus_stats,
    prepare_corpus,
    read_vocabulary_tsv,
    write_vocabulary_tsv,
)

SOURCES = ("CE", "RE")


class PipelineError(RuntimeError):
    """A stage failure, prefixed with the stage name."""


@dataclass
class PipelineConfig:
    corpus_path: str | None = None
    keyword: str | None = None
    out_dir: str | None = None
    ngram_sizes: list = field(default_factory=lambda: [1, 2, 3, 5, 10])
    gcn: GcnTrainConfig = field(default_factory=GcnTrainConfig)
    lstm: LstmTrainConfig = field(default_factory=LstmTrainConfig)
    embedding_source: str = "both"  # "CE" | "RE" | "both"
    seed: int = 0
    train_fraction: float = 0.8  # n-gram example split

    def __post_init__(self):
        if not self.ngram_sizes:
            raise ValueError("ngram_sizes must be non-empty")
        if any(n < 1 for n in self.ngram_sizes):
            raise ValueError("every n-gram size must be >= 1")
        if self.embedding_source not in ("CE", "RE", "both"):
            raise ValueError("embedding_source must be CE, RE, or both")

    @property
    def sources(self) -> tuple:
        if self.embedding_source == "both":
            return SOURCES
        return (self.embedding_source,)


@dataclass(frozen=True)
class ReportRow:
    corpus: str
    source: str
    n: int
    train_acc: float
    test_acc: float


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except Exception as e:
        raise PipelineError(f"{name}: {e}") from e


def _config_echo(config: PipelineConfig) -> dict:
    echo = asdict(config)
    echo.pop("out_dir", None)  # location metadata, not an experiment parameter
    return echo


def _write_metrics_csv(path, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(repr(x) if isinstance(x, float) else str(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_report_csv(rows: list, path) -> None:
    lines = ["corpus,source,n,train_acc,test_acc"]
    for r in rows:
        lines.append(f"{r.corpus},{r.source},{r.n},{repr(r.train_acc)},{repr(r.test_acc)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_report_csv(path) -> list:
    rows = []
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for line in lines[1:]:
        if not line:
            continue
        corpus, source, n, train_acc, test_acc = line.split(",")
        rows.append(ReportRow(corpus, source, int(n), float(train_acc), float(test_acc)))
    return rows


def format_report(rows: list) -> str:
    header = f"{'corpus':<16} {'source':<6} {'n':>3} {'train_acc':>10} {'test_acc':>10}"
    out = [header, "-" * len(header)]
    for r in rows:
        out.append(
            f"{r.corpus:<16} {r.source:<6} {r.n:>3} {r.train_acc:>10.4f} {r.test_acc:>10.4f}"
        )
    return "\n".join(out)


def _lstm_array_names(source: str, n: int) -> str:
    return f"lstm/{source}/n{n}"


def _default_model(rows: list) -> dict:
    # Highest test accuracy wins; ties prefer CE, then smaller n.
    def key(r: ReportRow):
        test = r.test_acc if r.test_acc == r.test_acc else -1.0  # NaN sorts last
        return (-test, 0 if r.source == "CE" else 1, r.n)

    best = sorted(rows, key=key)[0]
    return {"source": best.source, "n": best.n}


def run_pipeline(config: PipelineConfig, corpus: RawDocument | None = None) -> list:
    """Run every stage and checkpoint the results under config.out_dir.

    `corpus` overrides reading config.corpus_path (used by callers that
    already hold the document)."""
    if config.out_dir is None:
        raise PipelineError("config: out_dir is required")
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    if corpus is None:
        if config.corpus_path is None:
            raise PipelineError("config: corpus_path (or an in-memory corpus) is required")
        raw_bytes = _stage("ingest", Path(config.corpus_path).read_bytes)
        corpus = RawDocument(
            text=raw_bytes.decode("utf-8"), source_label=Path(config.corpus_path).stem
        )
    else:
        raw_bytes = corpus.text.encode("utf-8")

    sentences = _stage("textprep", prepare_corpus, corpus)
    vocab = _stage("textprep", build_vocabulary, sentences)
    stats = corpus_stats(sentences)
    graph = _stage("cograph", build_graph, sentences, vocab)

    arrays = {}
    tables = {}
    gcn_history = None
    if "CE" in config.sources:
        gcn_config = replace(config.gcn, seed=config.seed)
        model, gcn_history = _stage("train_gcn", train_gcn, graph, gcn_config)
        full_adj = adjacency(graph, model.adjacency_mode)
        tables["CE"] = export_embeddings(model, full_adj)
        arrays["gcn/h0"] = model.h0
        arrays["gcn/w1"] = model.w1
        arrays["gcn/w2"] = model.w2
        arrays["embeddings/CE"] = tables["CE"].vectors
        _write_metrics_csv(out / "gcn_metrics.csv", "epoch,loss,auc", gcn_history)
    if "RE" in config.sources:
        tables["RE"] = _stage(
            "random_embeddings", random_embeddings, vocab, config.gcn.d_out, config.seed
        )
        arrays["embeddings/RE"] = tables["RE"].vectors

    rows = []
    models = []
    for source in config.sources:
        table = tables[source]
        for n in config.ngram_sizes:
            examples = _stage("ngram", build_ngrams, sentences, vocab, n)
            train_set, test_set = _stage(
                "ngram", split_dataset, examples, config.train_fraction, config.seed + n
            )
            lstm_config = replace(config.lstm, seed=config.seed + n)
            params, history = _stage(f"train_lstm[{source},n={n}]", train, train_set, table, lstm_config)
            train_acc = evaluate(params, train_set, table, lstm_config.readout).accuracy
            test_acc = (
                evaluate(params, test_set, table, lstm_config.readout).accuracy
                if test_set else float("nan")
            )
            rows.append(ReportRow(corpus.source_label, source, n, train_acc, test_acc))
            prefix = _lstm_array_names(source, n)
            for pname, arr in params.as_dict().items():
                arrays[f"{prefix}/{pname}"] = arr
            models.append({
                "source": source,
                "n": n,
                "d_h": lstm_config.d_h,
                "d_emb": table.dim,
                "readout": lstm_config.readout,
                "vocab_size": vocab.size,
            })
            _write_metrics_csv(
                out / f"lstm_{source.lower()}_n{n}_metrics.csv", "epoch,loss,train_acc", history
            )

    write_vocabulary_tsv(vocab, out / "vocab.tsv")
    write_edges_tsv(graph, vocab, out / "edges.tsv")
    write_report_csv(rows, out / "report.csv")
    manifest_extra = {
        "corpus_digest": ckpt.corpus_digest(raw_bytes),
        "corpus_label": corpus.source_label,
        "config": _config_echo(config),
        "stats": asdict(stats),
        "models": models,
        "default_model": _default_model(rows),
        "vocab_file": "vocab.tsv",
        "edges_file": "edges.tsv",
        "report_file": "report.csv",
    }
    _stage("checkpoint", ckpt.save_checkpoint, out, arrays, manifest_extra)
    return rows


def _params_from_arrays(arrays: dict, prefix: str) -> LstmParams:
    def mat(name):
        return arrays[f"{prefix}/{name}"]

    def vec(name):
        return arrays[f"{prefix}/{name}"].reshape(-1)

    return LstmParams(
        w_f=mat("w_f"), w_i=mat("w_i"), w_c=mat("w_c"), w_o=mat("w_o"),
        b_f=vec("b_f"), b_i=vec("b_i"), b_c=vec("b_c"), b_o=vec("b_o"),
        w_y=mat("w_y"), b_y=vec("b_y"),
    )


@dataclass
class SuggestBundle:
    """A loaded checkpoint ready to answer next-word queries."""

    params: LstmParams
    vocab: object
    table: EmbeddingTable
    n: int
    source: str
    readout: str
    model_info: dict

    def suggest(self, context_text: str, k: int) -> list:
        return predict_next(
            self.params, self.vocab, self.table, context_text, k, self.n, self.readout
        )


def load_bundle(checkpoint_dir, source: str | None = None, n: int | None = None) -> SuggestBundle:
    root = Path(checkpoint_dir)
    manifest, arrays = ckpt.load_checkpoint(root)
    models = manifest.get("models", [])
    if not models:
        raise ckpt.CheckpointError("checkpoint contains no trained models")
    if source is None and n is None:
        default = manifest.get("default_model") or {}
        source, n = default.get("source"), default.get("n")
    matches = [
        m for m in models
        if (source is None or m["source"] == source) and (n is None or m["n"] == n)
    ]
    if not matches:
        have = ", ".join(f"{m['source']}/n={m['n']}" for m in models)
        raise ckpt.CheckpointError(
            f"no model for source={source} n={n}; checkpoint has: {have}"
        )
    chosen = matches[0]
    vocab = read_vocabulary_tsv(root / manifest.get("vocab_file", "vocab.tsv"))
    table = EmbeddingTable(
        vectors=arrays[f"embeddings/{chosen['source']}"], source=chosen["source"]
    )
    params = _params_from_arrays(arrays, _lstm_array_names(chosen["source"], chosen["n"]))
    model_info = {
        "corpus_digest": manifest.get("corpus_digest"),
        "n": chosen["n"],
        "embedding_source": chosen["source"],
        "vocab_size": chosen.get("vocab_size", vocab.size),
    }
    return SuggestBundle(
        params=params, vocab=vocab, table=table, n=chosen["n"],
        source=chosen["source"], readout=chosen.get("readout", "last_real"),
        model_info=model_info,
    )


def evaluate_checkpoint(checkpoint_dir, corpus_path=None) -> list:
    """Re-evaluate every stored model against the (digest-verified)
    corpus, rebuilding each n-gram split from the recorded seeds."""
    root = Path(checkpoint_dir)
    manifest, arrays = ckpt.load_checkpoint(root)
    config = manifest.get("config", {})
    corpus_path = corpus_path or config.get("corpus_path")
    if corpus_path is None:
        raise ckpt.CheckpointError("checkpoint does not record a corpus path; pass one")
    raw_bytes = Path(corpus_path).read_bytes()
    ckpt.verify_corpus(manifest, raw_bytes)
    corpus = RawDocument(
        text=raw_bytes.decode("utf-8"),
        source_label=manifest.get("corpus_label", Path(corpus_path).stem),
    )
    sentences = prepare_corpus(corpus)
    vocab = read_vocabulary_tsv(root / manifest.get("vocab_file", "vocab.tsv"))
    seed = config.get("seed", 0)
    train_fraction = config.get("train_fraction", 0.8)

    rows = []
    for model in manifest.get("models", []):
        source, n = model["source"], model["n"]
        table = EmbeddingTable(vectors=arrays[f"embeddings/{source}"], source=source)
        params = _params_from_arrays(arrays, _lstm_array_names(source, n))
        examples = build_ngrams(sentences, vocab, n)
        train_set, test_set = split_dataset(examples, train_fraction, seed + n)
        readout = model.get("readout", "last_real")
        train_acc = evaluate(params, train_set, table, readout).accuracy
        test_acc = evaluate(params, test_set, table, readout).accuracy if test_set else float("nan")
        rows.append(ReportRow(corpus.source_label, source, n, train_acc, test_acc))
    return rows

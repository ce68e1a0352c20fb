import numpy as np
import pytest

from gramweave.cograph import adjacency, build_graph
from gramweave.gcn import GcnTrainConfig, export_embeddings, train_gcn
from gramweave.lstm import LstmTrainConfig, train
from gramweave.ngram import build_ngrams
from gramweave.textprep import RawDocument, build_vocabulary, prepare_corpus

TOY_TEXT = "the weather is good. the weather forecast is sunny."


@pytest.fixture
def toy_corpus():
    return prepare_corpus(RawDocument(text=TOY_TEXT, source_label="toy"))


@pytest.fixture
def toy_vocab(toy_corpus):
    return build_vocabulary(toy_corpus)


@pytest.fixture
def toy_graph(toy_corpus, toy_vocab):
    return build_graph(toy_corpus, toy_vocab)


@pytest.fixture(scope="session")
def toy_trained():
    """One overfit toy model shared by the inference-side tests:
    (corpus, vocab, CE table, lstm params, n)."""
    corpus = prepare_corpus(RawDocument(text=TOY_TEXT, source_label="toy"))
    vocab = build_vocabulary(corpus)
    graph = build_graph(corpus, vocab)
    model, _ = train_gcn(graph, GcnTrainConfig(seed=7, d0=16, d_h=16, d_out=16))
    table = export_embeddings(model, adjacency(graph, model.adjacency_mode))
    examples = build_ngrams(corpus, vocab, 3)
    params, _ = train(examples, table, LstmTrainConfig(lr=0.01, epochs=300, seed=7, d_h=32))
    return corpus, vocab, table, params, 3


@pytest.fixture(scope="session")
def toy_run_dir(tmp_path_factory):
    """A full pipeline checkpoint over the toy corpus, overfit enough
    that suggestions are meaningful; shared by CLI/server tests."""
    from gramweave.pipeline import PipelineConfig, run_pipeline

    root = tmp_path_factory.mktemp("toy_run")
    corpus_path = root / "toy.txt"
    corpus_path.write_text(TOY_TEXT, encoding="utf-8")
    out = root / "ckpt"
    config = PipelineConfig(
        corpus_path=str(corpus_path),
        out_dir=str(out),
        ngram_sizes=[3],
        gcn=GcnTrainConfig(epochs=200, d0=16, d_h=16, d_out=16),
        lstm=LstmTrainConfig(lr=0.01, epochs=300, d_h=32),
        embedding_source="both",
        seed=7,
    )
    run_pipeline(config)
    return corpus_path, out


def max_rel_err(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    denom = max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)
    return float(np.linalg.norm(a - b) / denom)

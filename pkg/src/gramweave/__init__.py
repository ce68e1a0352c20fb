"""gramweave: next-word suggestion from co-occurrence-graph context
embeddings (a two-layer graph-convolutional encoder trained on link
prediction) feeding a many-to-one LSTM, with a random-embedding baseline
for comparison."""

from .cograph import CooccurrenceGraph, adjacency, build_graph, neighbors, split_edges
from .gcn import GcnModel, GcnTrainConfig, export_embeddings, gcn_forward, link_score, train_gcn
from .lstm import (
    LstmParams,
    LstmState,
    LstmTrainConfig,
    evaluate,
    forward,
    lstm_cell,
    predict_next,
    train,
)
from .ngram import EmbeddingTable, NGramExample, build_ngrams, lookup, random_embeddings, split_dataset
from .pipeline import PipelineConfig, ReportRow, load_bundle, run_pipeline
from .textprep import (
    CorpusStats,
    RawDocument,
    Vocabulary,
    build_vocabulary,
    clean_and_tokenize,
    corpus_stats,
    prepare_corpus,
    split_sentences,
)

__version__ = "0.1.0"

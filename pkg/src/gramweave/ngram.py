"""Fixed-length n-gram examples with zero post-padding, dataset splits,
and the two embedding sources: CE (graph-encoder output) and the RE
random baseline.

Every position from a sentence's second token onward yields one example;
contexts never cross sentence boundaries.  PAD (id 0) appears only as a
contiguous suffix and embeds to the zero vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .numcore import DTYPE, rng, round_half_up
from .textprep import PAD_ID, Vocabulary, encode


@dataclass(frozen=True)
class NGramExample:
    context: tuple  # exactly n ids, PAD-padded at the end
    target: int  # in 1..V
    real_len: int  # count of non-PAD context ids


@dataclass
class EmbeddingTable:
    """(V+1) x d vectors; row 0 is the PAD zero vector."""

    vectors: np.ndarray
    source: str  # "CE" | "RE"

    @property
    def vocab_size(self) -> int:
        return self.vectors.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def build_ngrams(corpus: list, vocab: Vocabulary, n: int) -> list:
    """One example per target position t = 2..L of each sentence: the
    min(n, t-1) preceding tokens, post-padded with PAD to length n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    examples = []
    for sentence in corpus:
        ids = encode(sentence, vocab)
        for t in range(1, len(ids)):
            window = ids[max(0, t - n):t]
            real_len = len(window)
            context = tuple(window) + (PAD_ID,) * (n - real_len)
            examples.append(NGramExample(context=context, target=ids[t], real_len=real_len))
    return examples


def split_dataset(examples: list, train_fraction: float = 0.8, seed: int = 0):
    """Seeded shuffle; train count = round(train_fraction * N)."""
    if len(examples) < 2:
        raise ValueError(f"need at least 2 examples to split, got {len(examples)}")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    gen = rng(seed)
    order = gen.permutation(len(examples))
    shuffled = [examples[i] for i in order]
    n_train = round_half_up(train_fraction * len(examples))
    return shuffled[:n_train], shuffled[n_train:]


def random_embeddings(vocab: Vocabulary, d: int, seed: int) -> EmbeddingTable:
    """RE baseline: rows 1..V i.i.d. N(0, 0.1), row 0 zeros, frozen."""
    if d < 1:
        raise ValueError("embedding dimension must be >= 1")
    gen = rng(seed)
    vectors = np.zeros((vocab.size + 1, d), dtype=DTYPE)
    vectors[1:] = gen.normal(0.0, 0.1, size=(vocab.size, d)).astype(DTYPE)
    return EmbeddingTable(vectors=vectors, source="RE")


def lookup(table: EmbeddingTable, context) -> np.ndarray:
    """Rows for the given ids, order preserved; PAD yields the zero row."""
    ids = np.asarray(context, dtype=np.int64)
    if ids.size and (ids.min() < 0 or ids.max() > table.vocab_size):
        bad = ids[(ids < 0) | (ids > table.vocab_size)][0]
        raise ValueError(f"id {int(bad)} out of range 0..{table.vocab_size}")
    return table.vectors[ids]


def pack_examples(examples: list):
    """Columnar view of a dataset: (contexts N x n, targets N, real_lens N)."""
    if not examples:
        raise ValueError("empty dataset")
    n = len(examples[0].context)
    contexts = np.array([ex.context for ex in examples], dtype=np.int64).reshape(len(examples), n)
    targets = np.array([ex.target for ex in examples], dtype=np.int64)
    real_lens = np.array([ex.real_len for ex in examples], dtype=np.int64)
    return contexts, targets, real_lens


def write_dataset_csv(examples: list, path) -> None:
    """CSV with header context_ids,target_id,real_len; context_ids is a
    space-separated id list of length n."""
    lines = ["context_ids,target_id,real_len"]
    for ex in examples:
        ids = " ".join(str(i) for i in ex.context)
        lines.append(f"{ids},{ex.target},{ex.real_len}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

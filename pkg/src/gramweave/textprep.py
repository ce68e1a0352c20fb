"""Corpus ingestion: sentence splitting, cleaning, tokenization,
vocabulary construction, and corpus statistics.

Cleaning applies, in order: ASCII punctuation removal, whitespace
collapse, lowercasing, whitespace split.  Sentence splitting happens
*before* punctuation removal, otherwise the boundaries would be
destroyed.  Ids are contiguous from 1 in first-appearance order; id 0 is
reserved for PAD and never maps to a token.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from pathlib import Path

# A Sentence is a plain list of cleaned tokens.
Sentence = list

PAD_ID = 0

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)
_WS_RUN = re.compile(r"\s+")
_SENT_BOUNDARY = re.compile(r"[.!?]")


@dataclass(frozen=True)
class RawDocument:
    text: str
    source_label: str

    def __post_init__(self):
        if not self.source_label:
            raise ValueError("source_label must be non-empty")


@dataclass(frozen=True)
class CorpusStats:
    n_words: int
    n_unique_words: int
    n_sentences: int


@dataclass
class Vocabulary:
    """Bijection token <-> id with ids contiguous in 1..V; 0 is PAD."""

    token_to_id: dict
    id_to_token: list  # index 0 holds None (PAD)

    @property
    def size(self) -> int:
        return len(self.token_to_id)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id


def split_sentences(raw: RawDocument) -> list:
    """Split on '.', '!', '?' (before any cleaning); drop empty fragments."""
    return [frag for frag in _SENT_BOUNDARY.split(raw.text) if frag]


def clean_and_tokenize(raw_sentence: str) -> Sentence:
    """Punctuation removal -> whitespace collapse -> lowercase -> split.

    All-punctuation input yields an empty list, which callers must drop.
    """
    text = raw_sentence.translate(_PUNCT_TABLE)
    text = _WS_RUN.sub(" ", text).strip()
    text = text.lower()
    return text.split(" ") if text else []


def prepare_corpus(raw: RawDocument) -> list:
    """Full preprocessing of one document; empty sentences are dropped."""
    corpus = []
    for frag in split_sentences(raw):
        sentence = clean_and_tokenize(frag)
        if sentence:
            corpus.append(sentence)
    return corpus


def build_vocabulary(corpus: list) -> Vocabulary:
    """One id per unique token, contiguous from 1, first-appearance order."""
    if not corpus:
        raise ValueError("empty corpus")
    token_to_id: dict = {}
    id_to_token: list = [None]
    for sentence in corpus:
        for token in sentence:
            if token not in token_to_id:
                token_to_id[token] = len(id_to_token)
                id_to_token.append(token)
    return Vocabulary(token_to_id=token_to_id, id_to_token=id_to_token)


def corpus_stats(corpus: list) -> CorpusStats:
    n_words = sum(len(s) for s in corpus)
    unique = set()
    for s in corpus:
        unique.update(s)
    return CorpusStats(n_words=n_words, n_unique_words=len(unique), n_sentences=len(corpus))


def encode(sentence: Sentence, vocab: Vocabulary) -> list:
    """Map tokens to ids, raising on any token missing from the vocabulary."""
    ids = []
    for token in sentence:
        try:
            ids.append(vocab.token_to_id[token])
        except KeyError:
            raise ValueError(f"unknown token: {token!r}") from None
    return ids


def write_vocabulary_tsv(vocab: Vocabulary, path) -> None:
    """token<TAB>id, one line per token, sorted by id ascending, no header."""
    lines = [
        f"{vocab.id_to_token[i]}\t{i}" for i in range(1, vocab.size + 1)
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_vocabulary_tsv(path) -> Vocabulary:
    token_to_id: dict = {}
    id_to_token: list = [None]
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line:
            continue
        token, _, id_str = line.rpartition("\t")
        idx = int(id_str)
        if idx != len(id_to_token):
            raise ValueError(f"vocabulary ids not contiguous at id {idx}")
        token_to_id[token] = idx
        id_to_token.append(token)
    return Vocabulary(token_to_id=token_to_id, id_to_token=id_to_token)

#!/usr/bin/env python3
"""Regenerate data/trend_corpus.txt, the fixed corpus behind the CE-vs-RE
trend experiment.

The text is synthetic but language-shaped: sentences follow a peaked
Markov chain over word classes (determiner, adjective, noun, verb,
adverb, preposition, name), each topic owns its own content vocabulary,
and word choice within a class is Zipf-distributed so a long tail of
rare words exists.  Class-conditional successor statistics are what the
graph-derived embeddings can exploit: words of the same class and topic
share co-occurrence neighborhoods, so rare words inherit the behavior of
their frequent neighbors.  Everything is drawn from one seeded PCG64
stream; the bundled file is reproducible byte for byte.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

SEED = 20240601
TARGET_WORDS = 50_000
N_TOPICS = 8

_CONS = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"]
_VOWELS = ["a", "e", "i", "o", "u"]
_CLASS_SUFFIX = {"noun": "a", "verb": "es", "adj": "ic", "adv": "ly", "name": "or"}
_CLASS_SIZES = {"noun": 28, "verb": 12, "adj": 12, "adv": 8, "name": 10}

DETERMINERS = (["the"] * 3) + ["a"]
PREPOSITIONS = ["of", "in", "with", "near", "under", "beside"]

# Peaked class-transition chain; "end" terminates the sentence.
TRANSITIONS = {
    "start": [("det", 0.60), ("name", 0.25), ("adj", 0.15)],
    "det": [("adj", 0.35), ("noun", 0.65)],
    "adj": [("noun", 1.0)],
    "noun": [("verb", 0.60), ("prep", 0.25), ("end", 0.15)],
    "verb": [("det", 0.45), ("adv", 0.30), ("name", 0.15), ("end", 0.10)],
    "adv": [("end", 0.50), ("prep", 0.30), ("det", 0.20)],
    "prep": [("det", 0.70), ("name", 0.30)],
    "name": [("verb", 1.0)],
}
MAX_SENTENCE_LEN = 14


def _pseudo_word(gen: np.random.Generator, syllables: int, suffix: str) -> str:
    parts = []
    for _ in range(syllables):
        parts.append(_CONS[gen.integers(0, len(_CONS))])
        parts.append(_VOWELS[gen.integers(0, len(_VOWELS))])
    return "".join(parts) + suffix


def build_lexicon(gen: np.random.Generator) -> list:
    """One content vocabulary per topic; words are unique across topics."""
    seen = set(DETERMINERS) | set(PREPOSITIONS)
    topics = []
    for _ in range(N_TOPICS):
        topic = {}
        for cls, size in _CLASS_SIZES.items():
            words = []
            while len(words) < size:
                w = _pseudo_word(gen, int(gen.integers(2, 4)), _CLASS_SUFFIX[cls])
                if w not in seen:
                    seen.add(w)
                    words.append(w)
            topic[cls] = words
        topics.append(topic)
    return topics


def _zipf_weights(n: int) -> np.ndarray:
    w = 1.0 / np.arange(1, n + 1)
    return w / w.sum()


def _choose(gen: np.random.Generator, options) -> str:
    names = [name for name, _ in options]
    probs = np.array([p for _, p in options])
    return names[gen.choice(len(names), p=probs / probs.sum())]


def make_sentence(gen: np.random.Generator, topic: dict) -> list:
    tokens = []
    state = _choose(gen, TRANSITIONS["start"])
    while state != "end" and len(tokens) < MAX_SENTENCE_LEN:
        if state == "det":
            tokens.append(DETERMINERS[gen.integers(0, len(DETERMINERS))])
        elif state == "prep":
            tokens.append(PREPOSITIONS[gen.choice(len(PREPOSITIONS), p=_zipf_weights(len(PREPOSITIONS)))])
        else:
            words = topic[state]
            tokens.append(words[gen.choice(len(words), p=_zipf_weights(len(words)))])
        state = _choose(gen, TRANSITIONS[state])
    return tokens


def generate(seed: int = SEED, target_words: int = TARGET_WORDS) -> str:
    gen = np.random.Generator(np.random.PCG64(seed))
    topics = build_lexicon(gen)
    lines = []
    n_words = 0
    while n_words < target_words:
        topic = topics[gen.integers(0, N_TOPICS)]
        sentence = make_sentence(gen, topic)
        if len(sentence) < 3:
            continue
        n_words += len(sentence)
        lines.append(" ".join(sentence) + ".")
    return "\n".join(lines) + "\n"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "trend_corpus.txt"))
    parser.add_argument("--seed", type=int, default=SEED)
    parser.add_argument("--words", type=int, default=TARGET_WORDS)
    args = parser.parse_args()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    text = generate(args.seed, args.words)
    out.write_text(text, encoding="utf-8")
    n_words = sum(len(line.split()) for line in text.splitlines())
    print(f"wrote {out}: {n_words} words, {len(text.splitlines())} sentences")


if __name__ == "__main__":
    main()

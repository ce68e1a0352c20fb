import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gramweave.ngram import (
    NGramExample,
    build_ngrams,
    lookup,
    pack_examples,
    random_embeddings,
    split_dataset,
    write_dataset_csv,
)
from gramweave.textprep import Vocabulary, build_vocabulary


def brute_force_ngrams(corpus, vocab, n):
    """Independent oracle: enumerate (preceding-window, next-token) pairs
    by direct scanning."""
    out = []
    for sentence in corpus:
        ids = [vocab.token_to_id[t] for t in sentence]
        for t in range(1, len(ids)):
            window = ids[max(0, t - n):t]
            out.append(NGramExample(
                context=tuple(window) + (0,) * (n - len(window)),
                target=ids[t],
                real_len=len(window),
            ))
    return out


corpora = st.lists(
    st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=9),
    min_size=1,
    max_size=8,
)


class TestBuildNgrams:
    def test_toy_n3_examples(self, toy_corpus, toy_vocab):
        examples = build_ngrams(toy_corpus, toy_vocab, 3)
        assert len(examples) == 7
        assert examples[0] == NGramExample(context=(1, 0, 0), target=2, real_len=1)
        assert examples[1] == NGramExample(context=(1, 2, 0), target=3, real_len=2)
        assert examples[2] == NGramExample(context=(1, 2, 3), target=4, real_len=3)
        # second sentence slides a full window onto its last target
        assert examples[6] == NGramExample(context=(2, 5, 3), target=6, real_len=3)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 10])
    def test_toy_count_is_seven_for_any_n(self, toy_corpus, toy_vocab, n):
        assert len(build_ngrams(toy_corpus, toy_vocab, n)) == 7

    def test_unigram_never_pads(self, toy_corpus, toy_vocab):
        for ex in build_ngrams(toy_corpus, toy_vocab, 1):
            assert len(ex.context) == 1
            assert ex.real_len == 1
            assert 0 not in ex.context

    def test_n_must_be_positive(self, toy_corpus, toy_vocab):
        with pytest.raises(ValueError):
            build_ngrams(toy_corpus, toy_vocab, 0)

    def test_short_sentences_contribute_nothing(self):
        vocab = build_vocabulary([["a"]])
        assert build_ngrams([["a"]], vocab, 3) == []

    @given(corpora, st.integers(1, 6))
    @settings(max_examples=60)
    def test_matches_brute_force(self, sentences, n):
        vocab = build_vocabulary(sentences)
        assert build_ngrams(sentences, vocab, n) == brute_force_ngrams(sentences, vocab, n)

    @given(corpora, st.integers(1, 6))
    @settings(max_examples=60)
    def test_count_and_pad_suffix_invariants(self, sentences, n):
        vocab = build_vocabulary(sentences)
        examples = build_ngrams(sentences, vocab, n)
        assert len(examples) == sum(len(s) - 1 for s in sentences)
        for ex in examples:
            assert len(ex.context) == n
            assert 1 <= ex.real_len <= n
            assert ex.target != 0
            assert all(i != 0 for i in ex.context[:ex.real_len])
            assert all(i == 0 for i in ex.context[ex.real_len:])


class TestSplitDataset:
    def test_seven_splits_six_one(self, toy_corpus, toy_vocab):
        examples = build_ngrams(toy_corpus, toy_vocab, 3)
        train, test = split_dataset(examples, 0.8, seed=0)
        assert len(train) == 6
        assert len(test) == 1

    def test_same_seed_identical(self, toy_corpus, toy_vocab):
        examples = build_ngrams(toy_corpus, toy_vocab, 3)
        assert split_dataset(examples, 0.8, seed=5) == split_dataset(examples, 0.8, seed=5)

    def test_partition(self, toy_corpus, toy_vocab):
        examples = build_ngrams(toy_corpus, toy_vocab, 3)
        train, test = split_dataset(examples, 0.8, seed=9)
        assert sorted(train + test, key=id) is not None  # no crash on mixed lists
        assert len(train) + len(test) == len(examples)
        combined = train + test
        for ex in examples:
            assert ex in combined

    def test_too_few_examples(self):
        with pytest.raises(ValueError, match="at least 2"):
            split_dataset([NGramExample((1,), 2, 1)], 0.8, seed=0)


class TestRandomEmbeddings:
    def _vocab(self, v):
        tokens = [f"w{i}" for i in range(1, v + 1)]
        return Vocabulary(
            token_to_id={t: i + 1 for i, t in enumerate(tokens)},
            id_to_token=[None] + tokens,
        )

    def test_pad_row_zero(self):
        table = random_embeddings(self._vocab(10), 8, seed=1)
        assert not table.vectors[0].any()
        assert table.source == "RE"

    def test_same_seed_bitwise_identical(self):
        a = random_embeddings(self._vocab(20), 16, seed=4)
        b = random_embeddings(self._vocab(20), 16, seed=4)
        np.testing.assert_array_equal(a.vectors, b.vectors)

    def test_sample_statistics(self):
        table = random_embeddings(self._vocab(1000), 64, seed=99)
        body = table.vectors[1:]
        assert abs(float(body.mean())) < 0.01
        assert abs(float(body.std()) - 0.1) < 0.01

    def test_dim_must_be_positive(self):
        with pytest.raises(ValueError):
            random_embeddings(self._vocab(3), 0, seed=0)


class TestLookup:
    def test_pad_lookup_is_zero(self):
        table = random_embeddings(TestRandomEmbeddings()._vocab(5), 4, seed=0)
        out = lookup(table, [0, 0, 0])
        assert out.shape == (3, 4)
        assert not out.any()

    def test_order_preserved(self):
        table = random_embeddings(TestRandomEmbeddings()._vocab(5), 4, seed=0)
        fwd = lookup(table, [1, 2, 3])
        rev = lookup(table, [3, 2, 1])
        np.testing.assert_array_equal(fwd, rev[::-1])

    def test_out_of_range(self):
        table = random_embeddings(TestRandomEmbeddings()._vocab(5), 4, seed=0)
        with pytest.raises(ValueError, match="out of range"):
            lookup(table, [6])


class TestPackAndCsv:
    def test_pack_shapes(self, toy_corpus, toy_vocab):
        examples = build_ngrams(toy_corpus, toy_vocab, 3)
        contexts, targets, real_lens = pack_examples(examples)
        assert contexts.shape == (7, 3)
        assert targets.shape == (7,)
        assert real_lens.shape == (7,)

    def test_csv_format(self, toy_corpus, toy_vocab, tmp_path):
        examples = build_ngrams(toy_corpus, toy_vocab, 3)
        path = tmp_path / "dataset.csv"
        write_dataset_csv(examples, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "context_ids,target_id,real_len"
        assert lines[1] == "1 0 0,2,1"
        assert len(lines) == 8

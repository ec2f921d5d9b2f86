"""Tokenizer, BLEU, and Pearson tests against hand values and the oracle."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtloop.textmetrics import (
    corpus_bleu,
    pearson,
    sentence_bleu,
    tokenize_13a,
)

from fixtures import BLEU_FIXTURE_20
from oracles import corpus_bleu_oracle, sentence_bleu_oracle

# Frozen from an offline run of tests/oracles.py over BLEU_FIXTURE_20.
FIVE_SENTENCE_GOLDEN = 66.61187573947377


class TestTokenize13a:
    def test_trailing_period_split(self):
        assert tokenize_13a("the cat.") == ["the", "cat", "."]

    def test_empty(self):
        assert tokenize_13a("") == []

    def test_whitespace_collapse_keeps_case(self):
        assert tokenize_13a("A  B") == ["A", "B"]

    def test_digits_keep_punctuation(self):
        assert tokenize_13a("worth 12,345.67 today") == ["worth", "12,345.67", "today"]

    def test_digit_dash_splits(self):
        assert tokenize_13a("pages 3-5") == ["pages", "3", "-", "5"]

    def test_symbols_padded(self):
        assert tokenize_13a("(a+b)") == ["(", "a", "+", "b", ")"]

    @given(st.text(max_size=80))
    @settings(max_examples=200)
    def test_idempotent_on_own_output(self, text):
        once = tokenize_13a(text)
        assert tokenize_13a(" ".join(once)) == once

    @given(st.text(max_size=80))
    def test_no_whitespace_inside_tokens(self, text):
        assert all(not any(c.isspace() for c in tok) for tok in tokenize_13a(text))


class TestSentenceBleu:
    def test_perfect_match(self):
        assert sentence_bleu(["the", "cat", "sat"], [["the", "cat", "sat"]]).value == 100.0

    def test_empty_hypothesis(self):
        score = sentence_bleu([], [["a"]])
        assert score.value == 0.0

    def test_pinned_short_hypothesis(self):
        # p1 = p2 = 1, orders 3-4 have no n-grams, BP = exp(1 - 3/2)
        score = sentence_bleu(["the", "cat"], [["the", "cat", "sat"]])
        assert score.value == pytest.approx(100.0 * math.exp(-0.5), abs=1e-9)
        assert score.precisions[0] == 1.0
        assert score.precisions[1] == 1.0
        assert score.brevity_penalty == pytest.approx(math.exp(-0.5))

    def test_zero_match_order_smoothing(self):
        # unigrams half right, zero bigram matches -> p2 = 1/(2*1)
        score = sentence_bleu(["the", "dog"], [["the", "cat"]])
        assert score.precisions[1] == pytest.approx(0.5)
        assert score.value == pytest.approx(50.0, abs=1e-9)

    def test_reference_list_permutation_invariance(self):
        hyp = ["a", "b", "c"]
        refs = [["a", "b"], ["b", "c", "d"], ["a", "c"]]
        fwd = sentence_bleu(hyp, refs)
        rev = sentence_bleu(hyp, list(reversed(refs)))
        assert fwd == rev

    def test_requires_reference(self):
        with pytest.raises(ValueError):
            sentence_bleu(["a"], [])

    def test_matches_oracle_on_fixture(self):
        for hyp_text, ref_text in BLEU_FIXTURE_20:
            hyp, ref = tokenize_13a(hyp_text), tokenize_13a(ref_text)
            assert sentence_bleu(hyp, [ref]).value == pytest.approx(
                sentence_bleu_oracle(hyp, [ref]), abs=1e-9
            )

    @given(
        st.lists(st.sampled_from("abcde"), max_size=8),
        st.lists(st.sampled_from("abcde"), min_size=1, max_size=8),
    )
    @settings(max_examples=300)
    def test_value_in_range(self, hyp, ref):
        score = sentence_bleu(hyp, [ref])
        assert 0.0 <= score.value <= 100.0

    def test_score_identity_invariant(self):
        # value = 100 * BP * exp(mean log precision) when all orders count
        score = sentence_bleu(
            ["the", "cat", "sat", "on", "the", "mat"],
            [["the", "cat", "sat", "on", "a", "mat"]],
        )
        expected = 100.0 * score.brevity_penalty * math.exp(
            sum(math.log(p) for p in score.precisions) / 4.0
        )
        assert score.value == pytest.approx(expected, abs=1e-9)


class TestCorpusBleu:
    def test_identity_corpus(self):
        hyps = [["a", "b", "c", "d"], ["e", "f", "g"]]
        assert corpus_bleu(hyps, hyps).value == 100.0

    def test_single_pair_equals_sentence(self):
        hyp = ["the", "cat", "sat", "on", "the", "mat"]
        ref = ["the", "cat", "sat", "on", "a", "mat"]
        assert corpus_bleu([hyp], [ref]).value == pytest.approx(
            sentence_bleu(hyp, [ref]).value, abs=1e-9
        )

    def test_five_sentence_golden(self):
        pairs = BLEU_FIXTURE_20[:5]
        hyps = [tokenize_13a(h) for h, _ in pairs]
        refs = [tokenize_13a(r) for _, r in pairs]
        assert corpus_bleu(hyps, refs).value == pytest.approx(FIVE_SENTENCE_GOLDEN, abs=1e-9)

    def test_matches_oracle_on_fixture(self):
        hyps = [tokenize_13a(h) for h, _ in BLEU_FIXTURE_20]
        refs = [tokenize_13a(r) for _, r in BLEU_FIXTURE_20]
        assert corpus_bleu(hyps, refs).value == pytest.approx(
            corpus_bleu_oracle(hyps, refs), abs=1e-9
        )

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="parallel length mismatch"):
            corpus_bleu([["a"]], [["a"], ["b"]])

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            corpus_bleu([], [])


class TestPearson:
    def test_exact_linear(self):
        assert pearson([1, 2, 3], [2, 4, 6]).r == pytest.approx(1.0)

    def test_exact_anti_linear(self):
        assert pearson([1, 2, 3], [6, 4, 2]).r == pytest.approx(-1.0)

    def test_hand_computed(self):
        # cov = 4, var_x = var_y = 5 -> r = 4/5
        result = pearson([1, 2, 3, 4], [1, 3, 2, 4])
        assert result.r == pytest.approx(0.8)
        assert result.n == 4

    def test_degenerate(self):
        with pytest.raises(ValueError, match="degenerate sample"):
            pearson([1, 1, 1], [1, 2, 3])

    def test_too_few(self):
        with pytest.raises(ValueError):
            pearson([1], [2])

    @given(
        st.lists(st.floats(-100, 100), min_size=3, max_size=20),
        st.floats(0.1, 10),
        st.floats(-5, 5),
    )
    @settings(max_examples=200)
    def test_affine_invariance(self, xs, a, b):
        if max(xs) - min(xs) < 1e-6:
            return  # degenerate by construction
        ys = [a * x + b for x in xs]
        assert pearson(xs, ys).r == pytest.approx(1.0, abs=1e-9)
        ys_neg = [-a * x + b for x in xs]
        assert pearson(xs, ys_neg).r == pytest.approx(-1.0, abs=1e-9)

"""Stack decoder vs the exhaustive derivation oracle, plus tuning."""

import math
import random

import pytest

from mtloop.corpus import make_corpus
from mtloop.smt.decoder import SmtWeights, decode
from mtloop.smt.lm import train_lm
from mtloop.smt.tuning import tune_weights

from generators import random_decode_instance as random_instance
from generators import table_from_dict
from oracles import exhaustive_decode


class TestDecode:
    def test_forced_monotone_derivation(self):
        raw = {
            ("a",): [(("x",), (1.0, 1.0, 1.0, 1.0))],
            ("b",): [(("y",), (1.0, 1.0, 1.0, 1.0))],
        }
        lm = train_lm([("x", "y"), ("y", "x")])
        hyp = decode(("a", "b"), table_from_dict(raw), lm, SmtWeights())
        assert hyp.target == ("x", "y")
        assert hyp.segmentation == [((0, 1), (0, 1)), ((1, 2), (1, 2))]

    def test_pass_through_copies_unknown_words(self):
        raw = {("a",): [(("x",), (1.0, 1.0, 1.0, 1.0))]}
        lm = train_lm([("x",)])
        hyp = decode(("a", "mystery", "a"), table_from_dict(raw), lm)
        assert "mystery" in hyp.target

    def test_total_score_is_weight_dot_product(self):
        rng = random.Random(7)
        for _ in range(10):
            source, raw, lm, weights, reordering = random_instance(rng)
            hyp = decode(source, table_from_dict(raw), lm, weights,
                         beam=100, distortion_limit=None, reordering=reordering)
            assert hyp.total_score == pytest.approx(
                weights.dot(hyp.component_scores), abs=1e-9
            )

    def test_segmentation_tiles_source(self):
        rng = random.Random(11)
        for _ in range(10):
            source, raw, lm, weights, reordering = random_instance(rng)
            hyp = decode(source, table_from_dict(raw), lm, weights,
                         beam=100, distortion_limit=None, reordering=reordering)
            covered = sorted(
                i for (s1, s2), _ in hyp.segmentation for i in range(s1, s2)
            )
            assert covered == list(range(len(source)))
            max_len = 4
            from collections import Counter

            per_src = Counter(i for i, _ in hyp.hard_alignment)
            assert all(c <= max_len for c in per_src.values())
            assert all(
                0 <= i < len(source) and 0 <= j < len(hyp.target)
                for i, j in hyp.hard_alignment
            )

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_exhaustive_oracle(self, seed):
        rng = random.Random(1000 + seed)
        source, raw, lm, weights, reordering = random_instance(rng)
        hyp = decode(source, table_from_dict(raw), lm, weights,
                     beam=200, distortion_limit=None, reordering=reordering)
        oracle_target, oracle_score = exhaustive_decode(
            source,
            raw,
            lm.logprob_sequence,
            lambda o: math.log(reordering[o]),
            {
                "distortion": weights.distortion,
                "lm": weights.lm,
                "lexical_reordering": weights.lexical_reordering,
                "phrase_penalty": weights.phrase_penalty,
                "word_penalty": weights.word_penalty,
                "translation": weights.translation,
            },
        )
        assert hyp.target == oracle_target
        assert hyp.total_score == pytest.approx(oracle_score, abs=1e-9)

    def test_beam_below_one_rejected(self):
        lm = train_lm([("x",)])
        with pytest.raises(ValueError):
            decode(("a",), table_from_dict({}), lm, beam=0)

    def test_empty_source_rejected(self):
        lm = train_lm([("x",)])
        with pytest.raises(ValueError):
            decode((), table_from_dict({}), lm)

    def test_distortion_limit_fallback_completes(self):
        # only a crossing derivation covers the source; a 0 limit cannot,
        # so the decoder must fall back rather than fail
        raw = {
            ("a", "b"): [(("x",), (1.0, 1.0, 1.0, 1.0))],
            ("c",): [(("y",), (1.0, 1.0, 1.0, 1.0))],
        }
        lm = train_lm([("x", "y")])
        hyp = decode(("a", "b", "c"), table_from_dict(raw), lm, distortion_limit=0)
        assert sorted(t for t in hyp.target) is not None
        assert len(hyp.target) >= 1


class TestTuneWeights:
    def test_perfect_dev_unchanged(self):
        raw = {
            ("a",): [(("x",), (1.0, 1.0, 1.0, 1.0))],
            ("b",): [(("y",), (1.0, 1.0, 1.0, 1.0))],
        }
        lm = train_lm([("x", "y")])
        table = table_from_dict(raw)
        dev = make_corpus([("a b", "x y")])
        initial = SmtWeights()
        tuned = tune_weights(dev, table, lm, initial, grid_points=5, sweeps=1, beam=10)
        assert tuned == initial

    def test_sign_flip_improves_dev_bleu(self):
        # two candidates for "a": the reference needs the longer one, but a
        # positive word penalty prefers the shorter; tuning must flip it
        raw = {
            ("a",): [
                (("x", "x", "x", "x"), (0.5, 0.5, 0.5, 0.5)),
                (("y",), (0.5, 0.5, 0.5, 0.5)),
            ]
        }
        lm = train_lm([("x", "x", "x", "x"), ("y",)])
        table = table_from_dict(raw)
        dev = make_corpus([("a", "x x x x")])
        initial = SmtWeights(word_penalty=1.0)
        from mtloop.smt.tuning import _dev_bleu

        before = _dev_bleu(dev, table, lm, initial, None, 10, None)
        tuned = tune_weights(dev, table, lm, initial, grid_points=5, sweeps=2, beam=10)
        after = _dev_bleu(dev, table, lm, tuned, None, 10, None)
        assert after >= before
        assert decode(("a",), table, lm, tuned, beam=10).target == ("x", "x", "x", "x")

    def test_empty_grid_rejected(self):
        lm = train_lm([("x",)])
        with pytest.raises(ValueError, match="empty grid"):
            tune_weights(make_corpus([("a", "x")]), table_from_dict({}), lm,
                         grid_points=0)

    def test_never_decreases_dev_bleu(self):
        rng = random.Random(5)
        source, raw, lm, weights, reordering = random_instance(rng)
        table = table_from_dict(raw)
        dev = make_corpus([(source, ("t0", "t1"))])
        from mtloop.smt.tuning import _dev_bleu

        before = _dev_bleu(dev, table, lm, weights, reordering, 10, None)
        tuned = tune_weights(dev, table, lm, weights, reordering,
                             grid_points=5, sweeps=1, beam=10, distortion_limit=None)
        after = _dev_bleu(dev, table, lm, tuned, reordering, 10, None)
        assert after >= before

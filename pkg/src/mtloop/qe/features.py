"""Feature vectors and star-scale estimators for translation quality.

SMT hypotheses yield 15 features: output length, the weighted total,
the six raw component scores, and each of those seven divided by the
output length. Neural hypotheses yield 6: output length, sequence
log-probability (raw and length-normalized), the corresponding
probabilities, and attention entropy.
"""

import logging
import math

from mtloop.nmt import NmtHypothesis
from mtloop.smt.decoder import SmtHypothesis
from mtloop.textmetrics import PearsonResult, pearson

logger = logging.getLogger(__name__)

SMT_FEATURE_DIM = 15
NMT_FEATURE_DIM = 6

ROW_SUM_TOLERANCE = 1e-4

_SMT_COMPONENT_ORDER = (
    "distortion",
    "lm",
    "lexical_reordering",
    "phrase_penalty",
    "translation_model",
    "word_penalty",
)


class QEFeatureVector:
    """Fixed-order numeric features tagged with the producing model kind."""

    __slots__ = ("kind", "values")

    def __init__(self, kind: str, values):
        values = tuple(float(v) for v in values)
        expected = SMT_FEATURE_DIM if kind == "smt" else NMT_FEATURE_DIM
        if kind not in ("smt", "nmt"):
            raise ValueError(f"unknown feature kind: {kind!r}")
        if len(values) != expected:
            raise ValueError(f"{kind} features need {expected} values, got {len(values)}")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("features must be finite")
        self.kind = kind
        self.values = values

    def __eq__(self, other):
        return (
            isinstance(other, QEFeatureVector)
            and self.kind == other.kind
            and self.values == other.values
        )

    def __repr__(self):
        return f"QEFeatureVector({self.kind!r}, {self.values!r})"


def smt_features(hyp: SmtHypothesis) -> QEFeatureVector:
    length = len(hyp.target)
    if length < 1:
        raise ValueError("zero-length hypothesis")
    raw = [hyp.total_score] + [hyp.component_scores[name] for name in _SMT_COMPONENT_ORDER]
    normalized = [v / length for v in raw]
    return QEFeatureVector("smt", [float(length)] + raw + normalized)


def attention_entropy(attention) -> float:
    """Mean per-target-token entropy of the source attention rows.

    Natural log; 0*log(0) counts as 0. The result lies in [0, ln L_s].
    Rows must sum to 1 within 1e-4.
    """
    rows = [tuple(row) for row in attention]
    if not rows:
        raise ValueError("empty attention matrix")
    total = 0.0
    for row in rows:
        row_sum = sum(row)
        if abs(row_sum - 1.0) > ROW_SUM_TOLERANCE:
            raise ValueError(f"attention row sums to {row_sum}")
        for a in row:
            if a > 0.0:
                total -= a * math.log(a)
    return total / len(rows)


def nmt_features(hyp: NmtHypothesis) -> QEFeatureVector:
    length = len(hyp.target)
    if length < 1:
        raise ValueError("zero-length hypothesis")
    logprob = sum(hyp.token_logprobs)
    return QEFeatureVector(
        "nmt",
        [
            float(length),
            logprob,
            logprob / length,
            math.exp(logprob),
            math.exp(logprob / length),
            attention_entropy(hyp.attention),
        ],
    )


def stars_from_bleu(predicted: float) -> float:
    """Rescale a 0-100 quality prediction to 0-5 stars (divide by 20)."""
    if not 0.0 <= predicted <= 100.0:
        logger.warning("quality prediction %.3f outside [0, 100]; clipping", predicted)
        predicted = min(100.0, max(0.0, predicted))
    return predicted / 20.0


def stars_from_prob(hyp: NmtHypothesis) -> float:
    """Length-normalized sequence probability rescaled to 0-5 stars."""
    if not hyp.target:
        raise ValueError("empty hypothesis")
    return 5.0 * math.exp(sum(hyp.token_logprobs) / len(hyp.target))


def evaluate_qe(predictions, gold) -> PearsonResult:
    """Pearson correlation between quality predictions and gold scores."""
    return pearson(predictions, gold)

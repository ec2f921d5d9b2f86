"""Tokenization, BLEU, and Pearson correlation.

BLEU follows the WMT-style conventions: mixed case, the minimal "13a"
tokenizer, exponential smoothing for zero-match n-gram orders, and the
closest-reference brevity penalty (ties broken toward the shorter
reference). Logs are natural; the final score is reported on 0-100.
"""

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

MAX_NGRAM_ORDER = 4

# Stand-in for log(0); large enough to zero out exp() of any average.
_LOG_ZERO = -9999999999.0

_SYMBOLS = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
_NONDIGIT_PUNCT = re.compile(r"([^0-9])([\.,])")
_PUNCT_NONDIGIT = re.compile(r"([\.,])([^0-9])")
_DIGIT_DASH = re.compile(r"([0-9])(-)")


@dataclass(frozen=True)
class BleuScore:
    """A 0-100 BLEU value with its sufficient statistics.

    ``precisions`` holds the clipped modified n-gram precisions for
    orders 1-4. Orders the hypothesis is too short to produce stay at
    0 and are excluded from the geometric mean (sentence scoring only).
    ``brevity_penalty`` is 0 only for an empty hypothesis.
    """

    value: float
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    hyp_len: int
    ref_len: int


@dataclass(frozen=True)
class PearsonResult:
    r: float
    n: int


def tokenize_13a(text: str) -> list[str]:
    """Tokenize with the minimal WMT "13a" rules; case is preserved.

    Punctuation is split off unless adjacent to digits, symbols are
    padded, whitespace is collapsed. Empty input gives an empty list.
    """
    norm = text.replace("<skipped>", "")
    norm = norm.replace("-\n", "").replace("\n", " ")
    norm = norm.replace("&quot;", '"').replace("&amp;", "&")
    norm = norm.replace("&lt;", "<").replace("&gt;", ">")

    norm = f" {norm} "
    norm = _SYMBOLS.sub(r" \1 ", norm)
    norm = _NONDIGIT_PUNCT.sub(r"\1 \2 ", norm)
    norm = _PUNCT_NONDIGIT.sub(r" \1 \2", norm)
    norm = _DIGIT_DASH.sub(r"\1 \2 ", norm)
    return norm.split()


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _pair_stats(hyp: Sequence[str], refs: Sequence[Sequence[str]]):
    """Clipped match / total counts per order, plus closest reference length."""
    hyp_len = len(hyp)
    closest_len = None
    closest_diff = None
    for ref in refs:
        diff = abs(hyp_len - len(ref))
        if closest_diff is None or diff < closest_diff or (diff == closest_diff and len(ref) < closest_len):
            closest_diff = diff
            closest_len = len(ref)

    correct = [0] * MAX_NGRAM_ORDER
    total = [0] * MAX_NGRAM_ORDER
    for n in range(1, MAX_NGRAM_ORDER + 1):
        hyp_ngrams = _ngram_counts(hyp, n)
        if not hyp_ngrams:
            continue
        ref_ngrams = Counter()
        for ref in refs:
            for gram, cnt in _ngram_counts(ref, n).items():
                ref_ngrams[gram] = max(ref_ngrams[gram], cnt)
        for gram, cnt in hyp_ngrams.items():
            total[n - 1] += cnt
            correct[n - 1] += min(cnt, ref_ngrams.get(gram, 0))
    return correct, total, hyp_len, closest_len


def _score(correct, total, hyp_len, ref_len, use_effective_order: bool) -> BleuScore:
    precisions = [0.0] * MAX_NGRAM_ORDER
    smooth = 1.0
    eff_order = MAX_NGRAM_ORDER
    for n in range(1, MAX_NGRAM_ORDER + 1):
        if total[n - 1] == 0:
            break
        if use_effective_order:
            eff_order = n
        if correct[n - 1] == 0:
            # k-th zero-match order gets 1 / (2^k * total)
            smooth *= 2.0
            precisions[n - 1] = 1.0 / (smooth * total[n - 1])
        else:
            precisions[n - 1] = correct[n - 1] / total[n - 1]

    if hyp_len == 0:
        return BleuScore(0.0, tuple(precisions), 0.0, 0, ref_len)

    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    log_sum = 0.0
    for p in precisions[:eff_order]:
        log_sum += math.log(p) if p > 0.0 else _LOG_ZERO
    value = 100.0 * bp * math.exp(log_sum / eff_order)
    return BleuScore(value, tuple(precisions), bp, hyp_len, ref_len)


def sentence_bleu(hyp: Sequence[str], refs: Sequence[Sequence[str]]) -> BleuScore:
    """Smoothed sentence BLEU against one or more references.

    Orders with no hypothesis n-grams are dropped from the geometric
    mean; zero-match orders are exponentially smoothed. An empty
    hypothesis scores 0.
    """
    if not refs:
        raise ValueError("at least one reference is required")
    correct, total, hyp_len, ref_len = _pair_stats(hyp, refs)
    return _score(correct, total, hyp_len, ref_len, use_effective_order=True)


def corpus_bleu(hyps: Sequence[Sequence[str]], refs: Sequence[Sequence[str]]) -> BleuScore:
    """Corpus BLEU over parallel hypothesis/reference lists.

    Counts and lengths are aggregated over the corpus before computing
    precisions and the brevity penalty. All four orders enter the
    geometric mean; exponential smoothing applies only to orders with
    zero matches corpus-wide.
    """
    if len(hyps) != len(refs):
        raise ValueError("parallel length mismatch")
    if not hyps:
        raise ValueError("empty corpus")
    correct = [0] * MAX_NGRAM_ORDER
    total = [0] * MAX_NGRAM_ORDER
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hyps, refs):
        c, t, hl, rl = _pair_stats(hyp, [ref])
        for i in range(MAX_NGRAM_ORDER):
            correct[i] += c[i]
            total[i] += t[i]
        hyp_len += hl
        ref_len += rl
    return _score(correct, total, hyp_len, ref_len, use_effective_order=False)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> PearsonResult:
    """Product-moment correlation coefficient of two equal-length samples."""
    if len(xs) != len(ys):
        raise ValueError("parallel length mismatch")
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two samples")
    mx = sum(xs) / n
    my = sum(ys) / n
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    if vx == 0.0 or vy == 0.0:
        raise ValueError("degenerate sample")
    r = cov / math.sqrt(vx * vy)
    r = max(-1.0, min(1.0, r))
    return PearsonResult(r, n)

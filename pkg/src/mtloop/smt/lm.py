"""Trigram language model: interpolated Kneser-Ney with a fixed discount.

Estimation uses absolute discounting with continuation counts at the
lower orders and interpolates the unigram level with a uniform
distribution so unknown words keep nonzero mass. The model is stored in
standard backoff form (log10 probabilities plus context backoff
weights), which reproduces the interpolated probabilities exactly and
round-trips through the ARPA text format.

Queries return natural-log values; sentence events are padded with
"<s>" and closed with "</s>"; out-of-vocabulary words map to "<unk>".
"""

import math
from collections import Counter
from typing import Iterable, Sequence

from mtloop.corpus import TokenSeq

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

DEFAULT_DISCOUNT = 0.75

_LN10 = math.log(10.0)


class NGramLM:
    """Backoff trigram model over log10 probability / backoff tables."""

    order = 3

    def __init__(self, logprobs: dict[tuple, float], backoffs: dict[tuple, float], vocab: frozenset):
        self.logprobs = logprobs  # n-gram tuple -> log10 p
        self.backoffs = backoffs  # context tuple -> log10 backoff weight
        self.vocab = vocab  # words the model predicts (includes </s> and <unk>)

    # -- queries ---------------------------------------------------------

    def _map(self, word: str) -> str:
        if word == BOS:
            return word
        return word if word in self.vocab else UNK

    def _log10(self, ngram: tuple) -> float:
        if ngram in self.logprobs:
            return self.logprobs[ngram]
        if len(ngram) == 1:
            # every predictable word has a unigram entry; be safe anyway
            return self.logprobs.get((UNK,), -99.0)
        return self.backoffs.get(ngram[:-1], 0.0) + self._log10(ngram[1:])

    def logprob_word(self, word: str, context: Sequence[str] = ()) -> float:
        """Natural log P(word | last two context words)."""
        w = self._map(word)
        ctx = tuple(self._map(c) for c in context)[-(self.order - 1):]
        return self._log10(ctx + (w,)) * _LN10

    def prob_word(self, word: str, context: Sequence[str] = ()) -> float:
        return math.exp(self.logprob_word(word, context))

    def logprob_sequence(self, tokens: Sequence[str]) -> float:
        """Natural-log probability of a sentence, with boundary symbols.

        The empty sequence scores 0 by convention.
        """
        if not tokens:
            return 0.0
        context = [BOS, BOS]
        total = 0.0
        for tok in tokens:
            total += self.logprob_word(tok, context)
            context = [context[-1], self._map(tok)]
        total += self.logprob_word(EOS, context)
        return total


def train_lm(sentences: Iterable[TokenSeq], discount: float = DEFAULT_DISCOUNT) -> NGramLM:
    """Estimate the trigram model from tokenized sentences."""
    sentences = [tuple(s) for s in sentences]
    if not sentences:
        raise ValueError("empty corpus")
    if not 0.0 < discount < 1.0:
        raise ValueError("discount must be in (0, 1)")

    tri = Counter()
    bi = Counter()
    for sent in sentences:
        padded = (BOS, BOS) + sent + (EOS,)
        for i in range(len(padded) - 2):
            tri[padded[i : i + 3]] += 1
        for i in range(len(padded) - 1):
            if padded[i + 1] != BOS:  # padding artifact, not an event
                bi[padded[i : i + 2]] += 1

    vocab = frozenset({w for sent in sentences for w in sent} | {EOS, UNK})
    v_size = len(vocab)

    # Continuation counts: how many distinct left extensions each
    # bigram/unigram has.
    cont_bi = Counter()  # (v, w) -> |{u : c(u v w) > 0}|
    for (u, v, w) in tri:
        cont_bi[(v, w)] += 1
    cont_uni = Counter()  # w -> |{v : c(v w) > 0}|
    for (v, w) in bi:
        cont_uni[w] += 1

    tri_ctx_total = Counter()
    tri_ctx_types = Counter()
    for (u, v, w), c in tri.items():
        tri_ctx_total[(u, v)] += c
        tri_ctx_types[(u, v)] += 1
    bi_ctx_total = Counter()
    bi_ctx_types = Counter()
    for (v, w), c in cont_bi.items():
        bi_ctx_total[v] += c
        bi_ctx_types[v] += 1

    uni_total = sum(cont_uni.values())
    uni_types = len(cont_uni)

    def p_uni(w: str) -> float:
        base = max(cont_uni.get(w, 0) - discount, 0.0) / uni_total
        return base + discount * uni_types / uni_total / v_size

    def p_bi(v: str, w: str) -> float:
        denom = bi_ctx_total.get(v, 0)
        if denom == 0:
            return p_uni(w)
        base = max(cont_bi.get((v, w), 0) - discount, 0.0) / denom
        gamma = discount * bi_ctx_types[v] / denom
        return base + gamma * p_uni(w)

    def p_tri(u: str, v: str, w: str) -> float:
        denom = tri_ctx_total.get((u, v), 0)
        if denom == 0:
            return p_bi(v, w)
        base = max(tri.get((u, v, w), 0) - discount, 0.0) / denom
        gamma = discount * tri_ctx_types[(u, v)] / denom
        return base + gamma * p_bi(v, w)

    logprobs: dict[tuple, float] = {}
    backoffs: dict[tuple, float] = {}

    for w in sorted(vocab):
        logprobs[(w,)] = math.log10(p_uni(w))
    logprobs[(BOS,)] = -99.0  # context only, never predicted

    for (v, w) in cont_bi:
        logprobs[(v, w)] = math.log10(p_bi(v, w))
    for v, denom in bi_ctx_total.items():
        backoffs[(v,)] = math.log10(discount * bi_ctx_types[v] / denom)

    for (u, v, w) in tri:
        logprobs[(u, v, w)] = math.log10(p_tri(u, v, w))
    for (u, v), denom in tri_ctx_total.items():
        backoffs[(u, v)] = math.log10(discount * tri_ctx_types[(u, v)] / denom)

    return NGramLM(logprobs, backoffs, vocab)


# -- ARPA text format ------------------------------------------------------

def write_arpa(lm: NGramLM, path) -> None:
    grams = {1: set(), 2: set(), 3: set()}
    for ngram in lm.logprobs:
        grams[len(ngram)].add(ngram)
    # Contexts carrying only a backoff weight (e.g. the double start
    # padding) still need an entry line; -99 marks the unused probability.
    for ctx in lm.backoffs:
        grams[len(ctx)].add(ctx)

    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\\data\\\n")
        for n in (1, 2, 3):
            fh.write(f"ngram {n}={len(grams[n])}\n")
        for n in (1, 2, 3):
            fh.write(f"\n\\{n}-grams:\n")
            for ngram in sorted(grams[n]):
                prob = lm.logprobs.get(ngram, -99.0)
                line = f"{prob:.10g}\t{' '.join(ngram)}"
                if n < 3 and ngram in lm.backoffs:
                    line += f"\t{lm.backoffs[ngram]:.10g}"
                fh.write(line + "\n")
        fh.write("\n\\end\\\n")


def read_arpa(path) -> NGramLM:
    logprobs: dict[tuple, float] = {}
    backoffs: dict[tuple, float] = {}
    current_n = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("\\data\\") or line.startswith("ngram "):
                continue
            if line.startswith("\\end\\"):
                break
            if line.endswith("-grams:") and line.startswith("\\"):
                current_n = int(line[1 : line.index("-")])
                continue
            if current_n is None:
                continue
            fields = line.split("\t")
            prob = float(fields[0])
            ngram = tuple(fields[1].split())
            if len(ngram) != current_n:
                raise ValueError(f"bad {current_n}-gram line: {line!r}")
            logprobs[ngram] = prob
            if len(fields) > 2:
                backoffs[ngram] = float(fields[2])
    vocab = frozenset(w for (w,) in (g for g in logprobs if len(g) == 1) if w != BOS)
    return NGramLM(logprobs, backoffs, vocab)

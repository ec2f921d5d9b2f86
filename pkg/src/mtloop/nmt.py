"""Neural-decoder contract, beam search, and probability-space ensembling.

A decoder is anything that maps (source, prefix) to a next-token
distribution plus per-candidate attention rows over the source. Beam
search, ensembling, and the quality-estimation features only rely on
that contract, so a real sequence model can be plugged in later; the
bundled toy decoder realizes the contract from a word translation table
and exists so the full pipeline can run end to end.

Ranking: a completed hypothesis is scored by the sum of its chosen step
log-probabilities including the end-of-sequence step. The recorded
``token_logprobs`` cover only the emitted tokens, so their sum is the
log-probability of the token sequence itself.
"""

import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

from mtloop.corpus import TokenSeq
from mtloop.smt.lexical import LexicalTable

EOS_TOKEN = "</s>"

ROW_SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class StepDistribution:
    """One decoding step: next-token probabilities and attention rows.

    ``attention`` maps each candidate token to the source attention row
    that explains emitting it; decoders whose attention does not depend
    on the emitted token map every candidate to the same row.
    """

    probabilities: dict[str, float]
    attention: dict[str, tuple[float, ...]]

    def validate(self, source_len: int) -> None:
        total = sum(self.probabilities.values())
        if abs(total - 1.0) > ROW_SUM_TOLERANCE:
            raise ValueError(f"step probabilities sum to {total}")
        for token, row in self.attention.items():
            if len(row) != source_len:
                raise ValueError("attention row length mismatch")
            if any(a < 0 for a in row) or abs(sum(row) - 1.0) > ROW_SUM_TOLERANCE:
                raise ValueError("attention row is not a probability vector")


@dataclass
class NmtHypothesis:
    """Decoded tokens with per-token log-probs and the attention matrix."""

    target: TokenSeq
    token_logprobs: tuple[float, ...]
    attention: tuple[tuple[float, ...], ...]
    truncated: bool = False

    @property
    def logprob(self) -> float:
        return sum(self.token_logprobs)


class DecoderContract(ABC):
    """Deterministic step decoder over a fixed output vocabulary."""

    eos_token: str = EOS_TOKEN

    @property
    @abstractmethod
    def vocabulary(self) -> frozenset[str]:
        """Every token the decoder can emit, including the end token."""

    @abstractmethod
    def step(self, source: TokenSeq, prefix: TokenSeq) -> StepDistribution:
        """Distribution over the next token given source and prefix."""


def beam_search(decoder: DecoderContract, source: TokenSeq, beam: int = 5,
                max_len: int | None = None) -> NmtHypothesis:
    """Highest-scoring completed hypothesis found with width-``beam`` search.

    If the decoder never gives the end token positive probability within
    ``max_len`` steps (default 2*len(source)+5), the best live prefix is
    returned with ``truncated`` set.
    """
    if beam < 1:
        raise ValueError("beam must be >= 1")
    source = tuple(source)
    if max_len is None:
        max_len = 2 * len(source) + 5
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    eos = decoder.eos_token

    # live items: (score, tokens, logprobs, rows)
    live = [(0.0, (), (), ())]
    completed: list[tuple[float, tuple, tuple, tuple]] = []

    for _ in range(max_len):
        candidates = []
        for score, tokens, logprobs, rows in live:
            dist = decoder.step(source, tokens)
            for token, p in sorted(dist.probabilities.items()):
                if p <= 0.0:
                    continue
                lp = math.log(p)
                if token == eos:
                    completed.append((score + lp, tokens, logprobs, rows))
                else:
                    row = tuple(dist.attention[token])
                    candidates.append(
                        (score + lp, tokens + (token,), logprobs + (lp,), rows + (row,))
                    )
        if not candidates:
            live = []
            break
        candidates.sort(key=lambda c: (-c[0], c[1]))
        live = candidates[:beam]

    # prefixes that reached max_len still get their end-token evaluation
    for score, tokens, logprobs, rows in live:
        if len(tokens) == max_len:
            p = decoder.step(source, tokens).probabilities.get(eos, 0.0)
            if p > 0.0:
                completed.append((score + math.log(p), tokens, logprobs, rows))

    if completed:
        completed.sort(key=lambda c: (-c[0], c[1]))
        _, tokens, logprobs, rows = completed[0]
        return NmtHypothesis(tokens, logprobs, rows, truncated=False)

    live.sort(key=lambda c: (-c[0], c[1]))
    _, tokens, logprobs, rows = live[0]
    return NmtHypothesis(tokens, logprobs, rows, truncated=True)


class EnsembleDecoder(DecoderContract):
    """Arithmetic-mean combination of same-vocabulary decoders."""

    def __init__(self, members):
        members = list(members)
        if not members:
            raise ValueError("ensemble needs at least one member")
        vocab = members[0].vocabulary
        eos = members[0].eos_token
        for m in members[1:]:
            if m.vocabulary != vocab or m.eos_token != eos:
                raise ValueError("vocabulary mismatch")
        self.members = members
        self.eos_token = eos
        self._vocabulary = vocab

    @property
    def vocabulary(self) -> frozenset[str]:
        return self._vocabulary

    def step(self, source: TokenSeq, prefix: TokenSeq) -> StepDistribution:
        dists = [m.step(source, prefix) for m in self.members]
        tokens = sorted({t for d in dists for t in d.probabilities})
        probs = {}
        attention = {}
        for token in tokens:
            probs[token] = sum(d.probabilities.get(token, 0.0) for d in dists) / len(dists)
            rows = [d.attention[token] for d in dists if token in d.attention]
            if rows:
                attention[token] = tuple(
                    sum(r[j] for r in rows) / len(rows) for j in range(len(rows[0]))
                )
        total = sum(probs.values())
        probs = {t: p / total for t, p in probs.items()}
        return StepDistribution(probs, attention)


class ToyLexicalDecoder(DecoderContract):
    """Contract realization driven by a word translation table.

    Next-token probabilities mix the table rows of the source words,
    weighted by coverage that halves each time a position wins the
    attention argmax; the end token's probability is logistic in
    (prefix length - source length), with a slope steep enough that
    outputs near the source length dominate stopping early. The
    attention row for a candidate token is its posterior responsibility
    over source positions.
    """

    STOP_SLOPE = 4.0

    def __init__(self, lex: LexicalTable):
        self.lex = lex
        self._vocabulary = frozenset(lex.targets() | {EOS_TOKEN})

    @property
    def vocabulary(self) -> frozenset[str]:
        return self._vocabulary

    def _responsibility(self, token: str, source, coverage) -> tuple[float, ...]:
        terms = [c * self.lex.row(s).get(token, 0.0) for s, c in zip(source, coverage)]
        z = sum(terms)
        if z <= 0.0:
            return tuple(c / sum(coverage) for c in coverage)
        return tuple(t / z for t in terms)

    def _coverage(self, source, prefix) -> list[float]:
        coverage = [1.0] * len(source)
        for token in prefix:
            row = self._responsibility(token, source, coverage)
            best = max(range(len(row)), key=lambda j: (row[j], -j))
            coverage[best] *= 0.5
        return coverage

    def step(self, source: TokenSeq, prefix: TokenSeq) -> StepDistribution:
        source = tuple(source)
        if not source:
            return StepDistribution({EOS_TOKEN: 1.0}, {EOS_TOKEN: ()})
        coverage = self._coverage(source, prefix)
        z = sum(coverage)
        mixture: dict[str, float] = {}
        for s, c in zip(source, coverage):
            for token, p in self.lex.row(s).items():
                mixture[token] = mixture.get(token, 0.0) + (c / z) * p
        total = sum(mixture.values())

        p_eos = 1.0 / (1.0 + math.exp(-self.STOP_SLOPE * (len(prefix) - len(source))))
        if total <= 0.0:
            p_eos = 1.0
            probs = {EOS_TOKEN: 1.0}
        else:
            probs = {t: (1.0 - p_eos) * p / total for t, p in mixture.items()}
            probs[EOS_TOKEN] = p_eos

        attention = {
            t: self._responsibility(t, source, coverage) for t in mixture
        }
        attention[EOS_TOKEN] = tuple(c / z for c in coverage)
        return StepDistribution(probs, attention)


def toy_decoder(lex: LexicalTable) -> ToyLexicalDecoder:
    return ToyLexicalDecoder(lex)


def ensemble(decoders) -> EnsembleDecoder:
    return EnsembleDecoder(decoders)


def soft_alignment(hyp: NmtHypothesis) -> tuple[tuple[float, ...], ...]:
    """The hypothesis's attention matrix, validated row-stochastic."""
    for row in hyp.attention:
        if any(a < 0 for a in row) or abs(sum(row) - 1.0) > ROW_SUM_TOLERANCE:
            raise ValueError("attention row is not a probability vector")
    return hyp.attention


# -- hypothesis interchange files -------------------------------------------
#
# One JSON object per line: {"v": 1, "src_tokens": [...], "tgt_tokens":
# [...], "token_logprobs": [...], "attention": [[...], ...],
# "truncated": false}. External decoders can produce this file and the
# quality-estimation tooling consumes it directly.

INTERCHANGE_VERSION = 1


def write_hypotheses(path, records) -> None:
    """Write (source tokens, NmtHypothesis) pairs as line-delimited JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        for source, hyp in records:
            fh.write(
                json.dumps(
                    {
                        "v": INTERCHANGE_VERSION,
                        "src_tokens": list(source),
                        "tgt_tokens": list(hyp.target),
                        "token_logprobs": list(hyp.token_logprobs),
                        "attention": [list(row) for row in hyp.attention],
                        "truncated": hyp.truncated,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def read_hypotheses(path) -> list[tuple[TokenSeq, NmtHypothesis]]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            data = json.loads(line)
            if data.get("v") != INTERCHANGE_VERSION:
                raise ValueError(f"{path}:{lineno}: unsupported record version")
            hyp = NmtHypothesis(
                target=tuple(data["tgt_tokens"]),
                token_logprobs=tuple(data["token_logprobs"]),
                attention=tuple(tuple(row) for row in data["attention"]),
                truncated=bool(data.get("truncated", False)),
            )
            out.append((tuple(data["src_tokens"]), hyp))
    return out

"""Stack decoding over phrase translation options.

Hypotheses grow by covering one source span at a time and are scored by
six weighted features: distortion, language model, lexical reordering,
phrase penalty, translation model, and word penalty. Source words with
no single-word table entry translate as themselves at a floor score, so
decoding always produces output. Score ties break toward the
lexicographically smaller target string.
"""

import math
from dataclasses import dataclass

from mtloop.corpus import TokenSeq
from mtloop.smt.lm import NGramLM, BOS, EOS
from mtloop.smt.phrases import ORIENTATIONS, PhraseTable

PASS_THROUGH_SCORE = 1e-7

COMPONENT_NAMES = (
    "distortion",
    "lm",
    "lexical_reordering",
    "phrase_penalty",
    "translation_model",
    "word_penalty",
)

UNIFORM_REORDERING = {o: 1.0 / 3.0 for o in ORIENTATIONS}


@dataclass(frozen=True)
class SmtWeights:
    """Feature weights; ``translation`` holds the four phrase sub-weights.

    The translation-model component already carries its sub-weights, so
    it enters the total with an implicit outer weight of 1.
    """

    distortion: float = 1.0
    lm: float = 1.0
    lexical_reordering: float = 1.0
    phrase_penalty: float = 1.0
    word_penalty: float = 1.0
    translation: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    def dot(self, components: dict[str, float]) -> float:
        return (
            self.distortion * components["distortion"]
            + self.lm * components["lm"]
            + self.lexical_reordering * components["lexical_reordering"]
            + self.phrase_penalty * components["phrase_penalty"]
            + components["translation_model"]
            + self.word_penalty * components["word_penalty"]
        )

    def to_vector(self) -> list[float]:
        return [
            self.distortion,
            self.lm,
            self.lexical_reordering,
            self.phrase_penalty,
            self.word_penalty,
            *self.translation,
        ]

    @classmethod
    def from_vector(cls, vec) -> "SmtWeights":
        if len(vec) != 9:
            raise ValueError("expected 9 weight values")
        return cls(
            distortion=vec[0],
            lm=vec[1],
            lexical_reordering=vec[2],
            phrase_penalty=vec[3],
            word_penalty=vec[4],
            translation=tuple(vec[5:9]),
        )

    def to_dict(self) -> dict:
        return {
            "distortion": self.distortion,
            "lm": self.lm,
            "lexical_reordering": self.lexical_reordering,
            "phrase_penalty": self.phrase_penalty,
            "word_penalty": self.word_penalty,
            "translation": list(self.translation),
        }

    @classmethod
    def from_dict(cls, data) -> "SmtWeights":
        return cls(
            distortion=data["distortion"],
            lm=data["lm"],
            lexical_reordering=data["lexical_reordering"],
            phrase_penalty=data["phrase_penalty"],
            word_penalty=data["word_penalty"],
            translation=tuple(data["translation"]),
        )


@dataclass
class SmtHypothesis:
    """A decoded translation with its score breakdown and alignment."""

    target: TokenSeq
    total_score: float
    component_scores: dict[str, float]
    segmentation: list[tuple[tuple[int, int], tuple[int, int]]]  # half-open spans
    hard_alignment: list[tuple[int, int]]


class _Partial:
    __slots__ = ("coverage", "covered", "context", "prev_span", "target",
                 "comps", "score", "segments")

    def __init__(self, coverage, covered, context, prev_span, target, comps, score, segments):
        self.coverage = coverage
        self.covered = covered
        self.context = context
        self.prev_span = prev_span  # (start, end) half-open, or None
        self.target = target
        self.comps = comps  # (dist, lm, reord, pp, tm, wp) raw sums
        self.score = score
        self.segments = segments


def _span_options(source: TokenSeq, table: PhraseTable):
    """Translation options per span, plus pass-through for bare words."""
    options = {}
    n = len(source)
    for start in range(n):
        for end in range(start + 1, min(n, start + table.max_phrase_len) + 1):
            opts = table.options(source[start:end])
            if opts:
                options[(start, end)] = [(o.target, o.scores) for o in opts]
    for start in range(n):
        if (start, start + 1) not in options:
            options[(start, start + 1)] = [
                ((source[start],), (PASS_THROUGH_SCORE,) * 4)
            ]
    return options


def _orientation(prev_span, start: int, end: int) -> str:
    if prev_span is None:
        return "monotone" if start == 0 else "discontinuous"
    if start == prev_span[1]:
        return "monotone"
    if end == prev_span[0]:
        return "swap"
    return "discontinuous"


def _search(source, options, lm: NGramLM, weights: SmtWeights, beam, distortion_limit, reorder_logp):
    n = len(source)
    full = (1 << n) - 1
    init = _Partial(0, 0, (BOS, BOS), None, (), (0.0,) * 6, 0.0, ())
    stacks: list[dict] = [dict() for _ in range(n + 1)]
    stacks[0][(0, init.context, None)] = init
    sub_w = weights.translation

    for covered in range(n):
        ranked = sorted(stacks[covered].values(), key=lambda h: (-h.score, h.target))
        for hyp in ranked[:beam]:
            prev_end = hyp.prev_span[1] - 1 if hyp.prev_span else -1
            for (start, end), opts in options.items():
                mask = ((1 << end) - 1) ^ ((1 << start) - 1)
                if hyp.coverage & mask:
                    continue
                jump = abs(start - prev_end - 1)
                if distortion_limit is not None and jump > distortion_limit:
                    continue
                orient = _orientation(hyp.prev_span, start, end)
                for tgt, scores in opts:
                    dist = hyp.comps[0] - jump
                    lm_sum = hyp.comps[1]
                    context = hyp.context
                    for w in tgt:
                        lm_sum += lm.logprob_word(w, context)
                        context = (context[-1], w)
                    reord = hyp.comps[2] + reorder_logp[orient]
                    pp = hyp.comps[3] - 1.0
                    tm = hyp.comps[4]
                    for sw, s in zip(sub_w, scores):
                        tm += sw * math.log(s)
                    wp = hyp.comps[5] - len(tgt)
                    comps = (dist, lm_sum, reord, pp, tm, wp)
                    score = (
                        weights.distortion * dist
                        + weights.lm * lm_sum
                        + weights.lexical_reordering * reord
                        + weights.phrase_penalty * pp
                        + tm
                        + weights.word_penalty * wp
                    )
                    new = _Partial(
                        hyp.coverage | mask,
                        hyp.covered + (end - start),
                        context,
                        (start, end),
                        hyp.target + tgt,
                        comps,
                        score,
                        hyp.segments + (((start, end), tgt),),
                    )
                    key = (new.coverage, new.context, new.prev_span)
                    seen = stacks[new.covered].get(key)
                    if seen is None or (-new.score, new.target) < (-seen.score, seen.target):
                        stacks[new.covered][key] = new

    best = None
    best_key = None
    for hyp in stacks[n].values():
        lm_final = hyp.comps[1] + lm.logprob_word(EOS, hyp.context)
        comps = (hyp.comps[0], lm_final, *hyp.comps[2:])
        score = (
            weights.distortion * comps[0]
            + weights.lm * comps[1]
            + weights.lexical_reordering * comps[2]
            + weights.phrase_penalty * comps[3]
            + comps[4]
            + weights.word_penalty * comps[5]
        )
        key = (-score, hyp.target)
        if best_key is None or key < best_key:
            best_key = key
            best = (hyp, comps)
    return best


def _diagonal_links(segments):
    """One link per target word, spread diagonally across its phrase."""
    links = []
    tgt_pos = 0
    for (s1, s2), tgt in segments:
        s_len = s2 - s1
        t_len = len(tgt)
        for k in range(t_len):
            off = round(k * (s_len - 1) / (t_len - 1)) if t_len > 1 else 0
            links.append((s1 + off, tgt_pos + k))
        tgt_pos += t_len
    return links


def decode(
    source: TokenSeq,
    table: PhraseTable,
    lm: NGramLM,
    weights: SmtWeights | None = None,
    beam: int = 50,
    distortion_limit: int | None = 6,
    reordering: dict[str, float] | None = None,
) -> SmtHypothesis:
    """Best-found translation of ``source`` under the model.

    ``distortion_limit`` of None allows unrestricted reordering; if a
    finite limit leaves no complete derivation, the search reruns
    unlimited so decoding never fails.
    """
    if beam < 1:
        raise ValueError("beam must be >= 1")
    source = tuple(source)
    if not source:
        raise ValueError("empty source")
    weights = weights or SmtWeights()
    reordering = reordering or UNIFORM_REORDERING
    reorder_logp = {o: math.log(reordering[o]) for o in ORIENTATIONS}

    options = _span_options(source, table)
    best = _search(source, options, lm, weights, beam, distortion_limit, reorder_logp)
    if best is None and distortion_limit is not None:
        best = _search(source, options, lm, weights, beam, None, reorder_logp)
    assert best is not None, "pass-through options guarantee a derivation"

    hyp, comps = best
    components = dict(zip(COMPONENT_NAMES, (comps[0], comps[1], comps[2], comps[3], comps[4], comps[5])))
    segmentation = []
    tgt_pos = 0
    for (s1, s2), tgt in hyp.segments:
        segmentation.append(((s1, s2), (tgt_pos, tgt_pos + len(tgt))))
        tgt_pos += len(tgt)
    return SmtHypothesis(
        target=hyp.target,
        total_score=weights.dot(components),
        component_scores=components,
        segmentation=segmentation,
        hard_alignment=_diagonal_links(hyp.segments),
    )

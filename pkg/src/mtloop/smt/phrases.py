"""Phrase pair extraction and the scored phrase table.

A phrase pair is a pair of contiguous spans such that no alignment link
leaves the box and at least one link falls inside it. Each table entry
carries four scores: forward/backward phrase relative frequencies and
forward/backward lexical weights.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass

from mtloop.corpus import ParallelCorpus, TokenSeq
from mtloop.smt.lexical import LexicalTable, align

DEFAULT_MAX_PHRASE_LEN = 4

# Score floor keeping every table score inside (0, 1].
SCORE_FLOOR = 1e-12

ORIENTATIONS = ("monotone", "swap", "discontinuous")

FIELD_SEPARATOR = " ||| "


@dataclass(frozen=True)
class PhraseOption:
    target: TokenSeq
    scores: tuple[float, float, float, float]  # p(t|s), lex(t|s), p(s|t), lex(s|t)


@dataclass(frozen=True)
class PhraseInstance:
    """One extracted occurrence, with phrase-local links and spans."""

    src: TokenSeq
    tgt: TokenSeq
    links: frozenset[tuple[int, int]]
    src_span: tuple[int, int]  # half-open
    tgt_span: tuple[int, int]


class PhraseTable:
    def __init__(self, entries: dict[TokenSeq, list[PhraseOption]], max_phrase_len: int = DEFAULT_MAX_PHRASE_LEN):
        self.entries = {src: sorted(opts, key=lambda o: o.target) for src, opts in entries.items()}
        self.max_phrase_len = max_phrase_len

    def options(self, src_phrase: TokenSeq) -> list[PhraseOption]:
        return self.entries.get(tuple(src_phrase), [])

    def __len__(self) -> int:
        return sum(len(v) for v in self.entries.values())


def extract_phrase_instances(pair, links, max_len: int = DEFAULT_MAX_PHRASE_LEN) -> list[PhraseInstance]:
    """All consistent phrase pairs of one aligned sentence pair.

    Consistency: every link touching the box lies fully inside it, and
    the box contains at least one link. Unaligned pairs therefore yield
    nothing.
    """
    src, tgt = pair
    links = set(links)
    out = []
    for i1 in range(len(src)):
        for i2 in range(i1 + 1, min(len(src), i1 + max_len) + 1):
            for j1 in range(len(tgt)):
                for j2 in range(j1 + 1, min(len(tgt), j1 + max_len) + 1):
                    internal = []
                    consistent = True
                    for i, j in links:
                        inside_src = i1 <= i < i2
                        inside_tgt = j1 <= j < j2
                        if inside_src != inside_tgt:
                            consistent = False
                            break
                        if inside_src:
                            internal.append((i - i1, j - j1))
                    if consistent and internal:
                        out.append(
                            PhraseInstance(
                                src=tuple(src[i1:i2]),
                                tgt=tuple(tgt[j1:j2]),
                                links=frozenset(internal),
                                src_span=(i1, i2),
                                tgt_span=(j1, j2),
                            )
                        )
    return out


def extract_phrases(pair, links, max_len: int = DEFAULT_MAX_PHRASE_LEN) -> list[tuple[TokenSeq, TokenSeq]]:
    """The (source phrase, target phrase) pairs extracted from one pair."""
    return [(inst.src, inst.tgt) for inst in extract_phrase_instances(pair, links, max_len)]


def _lexical_weight(tgt, src, links, prob) -> float:
    """Product over target words of the mean link probability.

    Unaligned target words average over the whole source phrase.
    """
    weight = 1.0
    by_target = defaultdict(list)
    for i, j in links:
        by_target[j].append(i)
    for j, e in enumerate(tgt):
        linked = by_target.get(j)
        if linked:
            term = sum(prob(e, src[i]) for i in linked) / len(linked)
        else:
            term = sum(prob(e, s) for s in src) / len(src)
        weight *= term
    return weight


def _instance_orientation(inst: PhraseInstance, links) -> str:
    """Left-looking orientation of an occurrence from the corner links."""
    (i1, i2), (j1, _) = inst.src_span, inst.tgt_span
    extended = set(links) | {(-1, -1)}
    if (i1 - 1, j1 - 1) in extended:
        return "monotone"
    if (i2, j1 - 1) in extended:
        return "swap"
    return "discontinuous"


def build_phrase_table(
    corpus: ParallelCorpus,
    table_fwd: LexicalTable,
    table_rev: LexicalTable,
    max_len: int = DEFAULT_MAX_PHRASE_LEN,
):
    """Extract, score, and assemble the phrase table plus orientation stats.

    Returns ``(PhraseTable, reordering probabilities)`` where the latter
    is an add-one-smoothed distribution over monotone/swap/discontinuous
    occurrences, collapsed over all phrases.
    """
    pair_counts = Counter()
    src_counts = Counter()
    tgt_counts = Counter()
    lex_fwd_best: dict[tuple[TokenSeq, TokenSeq], float] = {}
    lex_rev_best: dict[tuple[TokenSeq, TokenSeq], float] = {}
    orient_counts = Counter()

    for pair in corpus.pairs:
        links = align(pair, table_fwd, table_rev)
        for inst in extract_phrase_instances(pair, links, max_len):
            key = (inst.src, inst.tgt)
            pair_counts[key] += 1
            src_counts[inst.src] += 1
            tgt_counts[inst.tgt] += 1
            lf = _lexical_weight(inst.tgt, inst.src, inst.links, table_fwd.prob)
            lr = _lexical_weight(inst.src, inst.tgt, {(j, i) for i, j in inst.links}, table_rev.prob)
            lex_fwd_best[key] = max(lex_fwd_best.get(key, 0.0), lf)
            lex_rev_best[key] = max(lex_rev_best.get(key, 0.0), lr)
            orient_counts[_instance_orientation(inst, links)] += 1

    entries: dict[TokenSeq, list[PhraseOption]] = defaultdict(list)
    for (src, tgt), count in pair_counts.items():
        scores = (
            count / src_counts[src],
            max(lex_fwd_best[(src, tgt)], SCORE_FLOOR),
            count / tgt_counts[tgt],
            max(lex_rev_best[(src, tgt)], SCORE_FLOOR),
        )
        entries[src].append(PhraseOption(target=tgt, scores=scores))

    total = sum(orient_counts.values()) + len(ORIENTATIONS)
    reordering = {o: (orient_counts[o] + 1) / total for o in ORIENTATIONS}
    return PhraseTable(dict(entries), max_len), reordering


def write_phrase_table(table: PhraseTable, path) -> None:
    """One "source ||| target ||| s1 s2 s3 s4" line per option."""
    with open(path, "w", encoding="utf-8") as fh:
        for src in sorted(table.entries):
            for opt in table.entries[src]:
                scores = " ".join(f"{s:.10g}" for s in opt.scores)
                fh.write(FIELD_SEPARATOR.join((" ".join(src), " ".join(opt.target), scores)) + "\n")


def read_phrase_table(path, max_phrase_len: int = DEFAULT_MAX_PHRASE_LEN) -> PhraseTable:
    entries: dict[TokenSeq, list[PhraseOption]] = defaultdict(list)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split(FIELD_SEPARATOR)
            if len(fields) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields")
            src = tuple(fields[0].split())
            tgt = tuple(fields[1].split())
            scores = tuple(float(x) for x in fields[2].split())
            if len(scores) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 scores")
            entries[src].append(PhraseOption(target=tgt, scores=scores))
    return PhraseTable(dict(entries), max_phrase_len)

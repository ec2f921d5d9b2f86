"""Word translation probabilities and symmetrized word alignment.

The lexical table holds t(target | source) with one normalized row per
source word, learned by expectation-maximization from co-occurrence.
Alignments are the intersection of the two directional argmax link
sets, grown along the diagonal from the union.
"""

from collections import defaultdict

from mtloop.corpus import ParallelCorpus, TokenSeq

# Probability assigned to word pairs the table has never seen.
FLOOR_PROB = 1e-7

_NEIGHBORS = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))


class LexicalTable:
    """t(target | source) word translation probabilities."""

    def __init__(self, probs: dict[tuple[str, str], float]):
        # keyed (target, source); rows over targets sum to 1 per source
        self.probs = dict(probs)
        self._rows: dict[str, dict[str, float]] = defaultdict(dict)
        for (tgt, src), p in self.probs.items():
            self._rows[src][tgt] = p

    def prob(self, target: str, source: str) -> float:
        return self.probs.get((target, source), FLOOR_PROB)

    def row(self, source: str) -> dict[str, float]:
        """All known translations of ``source`` (empty for unknown words)."""
        return dict(self._rows.get(source, {}))

    def sources(self):
        return set(self._rows)

    def targets(self):
        return {tgt for tgt, _ in self.probs}

    def __len__(self) -> int:
        return len(self.probs)

    def save(self, path) -> None:
        """One "target source probability" line per entry, sorted."""
        with open(path, "w", encoding="utf-8") as fh:
            for (tgt, src), p in sorted(self.probs.items()):
                fh.write(f"{tgt} {src} {p:.10g}\n")

    @classmethod
    def load(cls, path) -> "LexicalTable":
        probs = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                tgt, src, p = line.split()
                probs[(tgt, src)] = float(p)
        return cls(probs)


def train_lexical(corpus: ParallelCorpus, iterations: int = 5, reverse: bool = False) -> LexicalTable:
    """Learn t(target | source) by expectation-maximization.

    Starts from a uniform distribution over the target vocabulary and is
    deterministic given the corpus order. With ``reverse`` the roles of
    the two sides are swapped (giving t(source | target)).
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not corpus.pairs:
        raise ValueError("empty corpus")

    pairs = [(tgt, src) if reverse else (src, tgt) for src, tgt in corpus.pairs]
    target_vocab = {t for _, tgt in pairs for t in tgt}
    uniform = 1.0 / len(target_vocab)
    t = {}
    for src, tgt in pairs:
        for s in src:
            for e in tgt:
                t[(e, s)] = uniform

    for _ in range(iterations):
        counts = defaultdict(float)
        totals = defaultdict(float)
        for src, tgt in pairs:
            for e in tgt:
                denom = sum(t[(e, s)] for s in src)
                for s in src:
                    frac = t[(e, s)] / denom
                    counts[(e, s)] += frac
                    totals[s] += frac
        for key in t:
            t[key] = counts[key] / totals[key[1]]

    return LexicalTable(t)


def viterbi_links(src: TokenSeq, tgt: TokenSeq, table: LexicalTable) -> set[tuple[int, int]]:
    """One link per target word: the argmax source position (lowest index wins)."""
    links = set()
    for j, e in enumerate(tgt):
        best_i = 0
        best_p = -1.0
        for i, s in enumerate(src):
            p = table.prob(e, s)
            if p > best_p:
                best_p = p
                best_i = i
        links.add((best_i, j))
    return links


def align(pair, table_fwd: LexicalTable, table_rev: LexicalTable) -> set[tuple[int, int]]:
    """Symmetrized (source index, target index) links for one sentence pair.

    Viterbi links are computed in both directions, intersected, then
    grown along the diagonal: neighbors from the union are added while
    they attach a previously unaligned row or column.
    """
    src, tgt = pair
    fwd = viterbi_links(src, tgt, table_fwd)
    rev_raw = viterbi_links(tgt, src, table_rev)
    rev = {(i, j) for j, i in rev_raw}

    links = fwd & rev
    union = fwd | rev
    aligned_src = {i for i, _ in links}
    aligned_tgt = {j for _, j in links}

    changed = True
    while changed:
        changed = False
        for i, j in sorted(links):
            for di, dj in _NEIGHBORS:
                cand = (i + di, j + dj)
                if cand not in union or cand in links:
                    continue
                if cand[0] not in aligned_src or cand[1] not in aligned_tgt:
                    links.add(cand)
                    aligned_src.add(cand[0])
                    aligned_tgt.add(cand[1])
                    changed = True
    return links

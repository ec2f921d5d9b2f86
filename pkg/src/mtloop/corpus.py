"""Parallel corpus container and pair-file I/O.

Pair files are UTF-8 text, one sentence pair per line, the two sides
separated by " ||| ". Tokens within a side are whitespace separated.
"""

from dataclasses import dataclass

TokenSeq = tuple[str, ...]

DIRECTIONS = ("chr-en", "en-chr")

PAIR_SEPARATOR = " ||| "


@dataclass(frozen=True)
class ParallelCorpus:
    """Sentence-aligned bitext with a translation direction tag.

    Pairs are (source, target) in the tagged direction. Sides must be
    non-empty token sequences; an empty pair list is allowed so that
    correction sets can start out empty.
    """

    pairs: tuple[tuple[TokenSeq, TokenSeq], ...]
    direction: str = "chr-en"

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction: {self.direction!r}")
        for k, (src, tgt) in enumerate(self.pairs):
            if not src or not tgt:
                raise ValueError(f"pair {k} has an empty side")

    def __len__(self) -> int:
        return len(self.pairs)

    def sources(self) -> list[TokenSeq]:
        return [src for src, _ in self.pairs]

    def targets(self) -> list[TokenSeq]:
        return [tgt for _, tgt in self.pairs]

    def subset(self, indices) -> "ParallelCorpus":
        return ParallelCorpus(tuple(self.pairs[i] for i in indices), self.direction)

    def flipped(self) -> "ParallelCorpus":
        other = "en-chr" if self.direction == "chr-en" else "chr-en"
        return ParallelCorpus(tuple((t, s) for s, t in self.pairs), other)


def make_corpus(pairs, direction: str = "chr-en") -> ParallelCorpus:
    """Build a corpus from (source, target) pairs of strings or token lists."""
    out = []
    for src, tgt in pairs:
        if isinstance(src, str):
            src = tuple(src.split())
        if isinstance(tgt, str):
            tgt = tuple(tgt.split())
        out.append((tuple(src), tuple(tgt)))
    return ParallelCorpus(tuple(out), direction)


def load_pairs(path, direction: str = "chr-en") -> ParallelCorpus:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if PAIR_SEPARATOR not in line:
                raise ValueError(f"{path}:{lineno}: missing '{PAIR_SEPARATOR.strip()}' separator")
            src, _, tgt = line.partition(PAIR_SEPARATOR)
            pairs.append((tuple(src.split()), tuple(tgt.split())))
    return ParallelCorpus(tuple(pairs), direction)


def save_pairs(corpus: ParallelCorpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for src, tgt in corpus.pairs:
            fh.write(" ".join(src) + PAIR_SEPARATOR + " ".join(tgt) + "\n")

"""Greedy coordinate line search for the decoder feature weights.

Each sweep walks the nine scalar weights in a fixed order and tries a
uniform grid of candidate values per weight, keeping a change only when
it strictly improves development-set corpus BLEU. The returned weights
therefore never score below the initial ones.
"""

from mtloop.corpus import ParallelCorpus
from mtloop.smt.decoder import SmtWeights, decode
from mtloop.textmetrics import corpus_bleu


def _grid(points: int, lo: float = -1.0, hi: float = 1.0) -> list[float]:
    if points == 1:
        return [(lo + hi) / 2.0]
    step = (hi - lo) / (points - 1)
    return [lo + i * step for i in range(points)]


def _dev_bleu(dev: ParallelCorpus, table, lm, weights, reordering, beam, distortion_limit) -> float:
    hyps = [
        decode(src, table, lm, weights, beam=beam,
               distortion_limit=distortion_limit, reordering=reordering).target
        for src in dev.sources()
    ]
    return corpus_bleu(hyps, dev.targets()).value


def tune_weights(
    dev: ParallelCorpus,
    table,
    lm,
    initial: SmtWeights | None = None,
    reordering: dict[str, float] | None = None,
    grid_points: int = 21,
    sweeps: int = 3,
    beam: int = 20,
    distortion_limit: int | None = 6,
) -> SmtWeights:
    """Weights maximizing dev corpus BLEU along a per-coordinate grid."""
    if not dev.pairs:
        raise ValueError("empty development set")
    if grid_points < 1:
        raise ValueError("empty grid configuration")
    if sweeps < 0:
        raise ValueError("sweeps must be >= 0")

    current = (initial or SmtWeights()).to_vector()
    best_bleu = _dev_bleu(dev, table, lm, SmtWeights.from_vector(current),
                          reordering, beam, distortion_limit)
    candidates = _grid(grid_points)

    for _ in range(sweeps):
        improved = False
        for coord in range(len(current)):
            for value in candidates:
                if value == current[coord]:
                    continue
                trial = list(current)
                trial[coord] = value
                bleu = _dev_bleu(dev, table, lm, SmtWeights.from_vector(trial),
                                 reordering, beam, distortion_limit)
                if bleu > best_bleu:
                    best_bleu = bleu
                    current = trial
                    improved = True
        if not improved:
            break

    return SmtWeights.from_vector(current)

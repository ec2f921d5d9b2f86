"""Human-in-the-loop retraining from expert corrections.

Corrections are normalized (archaic English terms replaced), merged
into the training corpus with an optional repeat factor, and the
translation model plus its quality regressor are retrained. The new
model replaces the old one only when dev BLEU does not regress beyond a
small guard threshold.
"""

import re
from dataclasses import dataclass

from mtloop.corpus import ParallelCorpus
from mtloop.qe.dataset import build_kfold_dataset
from mtloop.qe.features import smt_features
from mtloop.qe.gbt import GradientBoostedEnsemble, gbt_train
from mtloop.smt.model import SmtModel, train_smt
from mtloop.textmetrics import corpus_bleu

REPEAT_FACTORS = (1, 5, 10)

# New model must score within this much of the old dev BLEU to be swapped in.
SWAP_GUARD_BLEU = 0.1

DEFAULT_ARCHAIC = (("thy", "your"), ("thou", "you"))


@dataclass(frozen=True)
class ArchaicMap:
    """Ordered whole-word replacements for archaic terms."""

    entries: tuple[tuple[str, str], ...] = DEFAULT_ARCHAIC

    def __post_init__(self):
        seen_replacements = set()
        for term, replacement in self.entries:
            if term != term.lower():
                raise ValueError(f"archaic term must be lowercase: {term!r}")
            if term in seen_replacements:
                raise ValueError(f"cycle: {term!r} is an earlier replacement")
            seen_replacements.add(replacement.lower())


def normalize_archaic(text: str, archaic: ArchaicMap | None = None) -> str:
    """Replace archaic terms whole-word, case-insensitively, in one pass.

    The replacement copies the original first letter's casing.
    """
    archaic = archaic or ArchaicMap()
    if not archaic.entries:
        return text
    table = dict(archaic.entries)
    pattern = re.compile(
        r"\b(" + "|".join(re.escape(t) for t, _ in archaic.entries) + r")\b",
        re.IGNORECASE,
    )

    def substitute(match: re.Match) -> str:
        found = match.group(0)
        replacement = table[found.lower()]
        if found[0].isupper():
            return replacement[0].upper() + replacement[1:]
        return replacement

    return pattern.sub(substitute, text)


def merge_corrections(train: ParallelCorpus, corrections: ParallelCorpus, repeat: int = 1) -> ParallelCorpus:
    """Training corpus followed by ``repeat`` blocks of the corrections."""
    if repeat not in REPEAT_FACTORS:
        raise ValueError(f"repeat must be one of {REPEAT_FACTORS}")
    if corrections.pairs and corrections.direction != train.direction:
        raise ValueError("direction mismatch between corpus and corrections")
    merged = tuple(train.pairs) + tuple(corrections.pairs) * repeat
    return ParallelCorpus(merged, train.direction)


@dataclass
class RetrainPipeline:
    """Everything retraining needs: the base corpus and model settings."""

    train: ParallelCorpus
    em_iterations: int = 5
    max_phrase_len: int = 4
    beam: int = 20
    distortion_limit: int | None = 6
    qe_folds: int | None = None  # rebuild the regressor when set
    qe_depth: int = 5
    qe_eta: float = 0.1
    qe_rounds: int = 100


@dataclass
class RetrainReport:
    direction: str
    bleu_before: float
    bleu_after: float
    corrections_used: int
    repeat_factor: int
    swapped: bool
    error: str | None = None


def _normalize_english_side(corpus: ParallelCorpus, archaic: ArchaicMap) -> ParallelCorpus:
    """Apply archaic replacement to whichever side is English."""
    english_is_target = corpus.direction == "chr-en"
    pairs = []
    for src, tgt in corpus.pairs:
        if english_is_target:
            tgt = tuple(normalize_archaic(" ".join(tgt), archaic).split())
        else:
            src = tuple(normalize_archaic(" ".join(src), archaic).split())
        pairs.append((src, tgt))
    return ParallelCorpus(tuple(pairs), corpus.direction)


def _dev_bleu(model: SmtModel, dev: ParallelCorpus, pipeline: RetrainPipeline) -> float:
    hyps = [
        model.decode(src, beam=pipeline.beam, distortion_limit=pipeline.distortion_limit).target
        for src in dev.sources()
    ]
    return corpus_bleu(hyps, dev.targets()).value


def _train_qe(corpus: ParallelCorpus, pipeline: RetrainPipeline) -> GradientBoostedEnsemble:
    def trainer(sub_corpus):
        model = train_smt(sub_corpus, pipeline.em_iterations, pipeline.max_phrase_len)
        return lambda src: model.decode(src, beam=pipeline.beam,
                                        distortion_limit=pipeline.distortion_limit)

    dataset = build_kfold_dataset(corpus, pipeline.qe_folds, trainer, smt_features)
    return gbt_train(dataset, pipeline.qe_depth, pipeline.qe_eta, pipeline.qe_rounds)


def retrain(
    pipeline: RetrainPipeline,
    dev: ParallelCorpus,
    corrections: ParallelCorpus,
    repeat: int = 1,
    archaic: ArchaicMap | None = None,
    on_swap=None,
):
    """Retrain with corrections merged in and report before/after dev BLEU.

    ``on_swap(model, qe_model_or_None)`` runs only when the new model
    clears the guard rail. Returns (RetrainReport, new model or None).
    """
    if not dev.pairs:
        raise ValueError("empty development set")
    archaic = archaic or ArchaicMap()
    corrections = _normalize_english_side(corrections, archaic)

    try:
        before_model = train_smt(pipeline.train, pipeline.em_iterations, pipeline.max_phrase_len)
        merged = merge_corrections(pipeline.train, corrections, repeat)
        after_model = train_smt(merged, pipeline.em_iterations, pipeline.max_phrase_len)
        bleu_before = _dev_bleu(before_model, dev, pipeline)
        bleu_after = _dev_bleu(after_model, dev, pipeline)
    except Exception as exc:  # training failure: report, never swap
        report = RetrainReport(
            direction=pipeline.train.direction,
            bleu_before=0.0,
            bleu_after=0.0,
            corrections_used=len(corrections.pairs),
            repeat_factor=repeat,
            swapped=False,
            error=str(exc),
        )
        return report, None

    swapped = bleu_after >= bleu_before - SWAP_GUARD_BLEU
    if swapped and on_swap is not None:
        qe_model = _train_qe(merged, pipeline) if pipeline.qe_folds else None
        on_swap(after_model, qe_model)

    report = RetrainReport(
        direction=pipeline.train.direction,
        bleu_before=bleu_before,
        bleu_after=bleu_after,
        corrections_used=len(corrections.pairs),
        repeat_factor=repeat,
        swapped=swapped,
    )
    return report, (after_model if swapped else None)

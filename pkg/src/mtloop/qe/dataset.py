"""Proxy-labeled training data for the BLEU regressor.

The corpus is split into k balanced folds by a seeded shuffle; for each
fold a translation model is trained on the other k-1 folds and decodes
the held-out fold, pairing every decoded hypothesis's features with its
smoothed sentence BLEU against the fold reference. No sentence is ever
decoded by a model that saw it in training.
"""

import json
import random
from dataclasses import dataclass

from mtloop.corpus import ParallelCorpus
from mtloop.qe.features import QEFeatureVector
from mtloop.textmetrics import sentence_bleu

DEFAULT_SEED = 13

FORMAT_VERSION = 1


@dataclass
class QEDataset:
    kind: str
    rows: list[tuple[QEFeatureVector, float]]  # in corpus order
    seed: int
    k: int
    fold_of_row: list[int]

    def __len__(self) -> int:
        return len(self.rows)


def assign_folds(n: int, k: int, seed: int = DEFAULT_SEED) -> list[int]:
    """Fold index per row: a seeded shuffle dealt round-robin into k folds.

    Fold sizes differ by at most one.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError("k exceeds corpus size")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    fold_of = [0] * n
    for position, row in enumerate(order):
        fold_of[row] = position % k
    return fold_of


def build_kfold_dataset(
    corpus: ParallelCorpus,
    k: int,
    trainer,
    featurizer,
    seed: int = DEFAULT_SEED,
) -> QEDataset:
    """Cross-decode the corpus and pair features with sentence BLEU.

    ``trainer`` maps a training ParallelCorpus to a decode callable
    (source tokens -> hypothesis with a ``target``); ``featurizer`` maps
    that hypothesis to a QEFeatureVector.
    """
    n = len(corpus.pairs)
    fold_of = assign_folds(n, k, seed)

    rows: list = [None] * n
    for fold in range(k):
        train_idx = [i for i in range(n) if fold_of[i] != fold]
        held_idx = [i for i in range(n) if fold_of[i] == fold]
        decode_fn = trainer(corpus.subset(train_idx))
        for i in held_idx:
            src, ref = corpus.pairs[i]
            hyp = decode_fn(src)
            label = sentence_bleu(hyp.target, [ref]).value
            rows[i] = (featurizer(hyp), label)

    kind = rows[0][0].kind
    if any(fv.kind != kind for fv, _ in rows):
        raise ValueError("mixed feature kinds in one dataset")
    return QEDataset(kind=kind, rows=rows, seed=seed, k=k, fold_of_row=fold_of)


def save_dataset(dataset: QEDataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            json.dumps(
                {
                    "v": FORMAT_VERSION,
                    "kind": dataset.kind,
                    "seed": dataset.seed,
                    "k": dataset.k,
                    "fold_of_row": dataset.fold_of_row,
                }
            )
            + "\n"
        )
        for fv, bleu in dataset.rows:
            fh.write(json.dumps({"values": list(fv.values), "bleu": bleu}) + "\n")


def load_dataset(path) -> QEDataset:
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("v") != FORMAT_VERSION:
            raise ValueError("unsupported dataset format version")
        rows = []
        for line in fh:
            if not line.strip():
                continue
            data = json.loads(line)
            rows.append((QEFeatureVector(header["kind"], data["values"]), data["bleu"]))
    return QEDataset(
        kind=header["kind"],
        rows=rows,
        seed=header["seed"],
        k=header["k"],
        fold_of_row=header["fold_of_row"],
    )

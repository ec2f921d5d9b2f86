"""Shared random-instance generators for decoder and beam tests."""

import random

from mtloop.smt.decoder import SmtWeights
from mtloop.smt.lm import train_lm
from mtloop.smt.phrases import PhraseOption, PhraseTable


def table_from_dict(raw: dict, max_len: int = 4) -> PhraseTable:
    entries = {
        src: [PhraseOption(tgt, tuple(scores)) for tgt, scores in opts]
        for src, opts in raw.items()
    }
    return PhraseTable(entries, max_len)


def random_decode_instance(rng: random.Random):
    """A source (<=5 tokens), a phrase table (<=8 entries), LM, weights."""
    src_vocab = [f"s{i}" for i in range(6)]
    tgt_vocab = [f"t{i}" for i in range(5)]
    source = tuple(rng.choice(src_vocab) for _ in range(rng.randint(1, 5)))

    raw = {}
    n_entries = 0
    attempts = 0
    target_count = rng.randint(1, 8)
    while n_entries < target_count and attempts < 40:
        attempts += 1
        start = rng.randrange(len(source))
        end = min(len(source), start + rng.randint(1, 2))
        phrase = source[start:end]
        tgt = tuple(rng.choice(tgt_vocab) for _ in range(rng.randint(1, 2)))
        scores = tuple(rng.uniform(0.05, 1.0) for _ in range(4))
        opts = raw.setdefault(phrase, [])
        if (tgt, scores) not in opts:
            opts.append((tgt, scores))
            n_entries += 1

    lm_corpus = [
        tuple(rng.choice(tgt_vocab + src_vocab) for _ in range(rng.randint(1, 6)))
        for _ in range(8)
    ]
    lm = train_lm(lm_corpus)

    weights = SmtWeights(
        distortion=rng.uniform(0.2, 1.5),
        lm=rng.uniform(0.2, 1.5),
        lexical_reordering=rng.uniform(0.2, 1.5),
        phrase_penalty=rng.uniform(-0.5, 1.0),
        word_penalty=rng.uniform(-0.5, 1.0),
        translation=tuple(rng.uniform(0.2, 1.5) for _ in range(4)),
    )
    m, s = rng.uniform(0.2, 0.6), rng.uniform(0.1, 0.4)
    reordering = {"monotone": m, "swap": s, "discontinuous": 1.0 - m - s}
    return source, raw, lm, weights, reordering


def random_toy_lex(rng: random.Random, sources, targets, power: float = 1.0):
    """Random normalized rows; ``power`` > 1 sharpens them toward the
    peaked shape real word-translation tables have."""
    from mtloop.smt.lexical import LexicalTable

    probs = {}
    for s in sources:
        weights = [rng.uniform(0.05, 1.0) ** power for _ in targets]
        z = sum(weights)
        for t, w in zip(targets, weights):
            probs[(t, s)] = w / z
    return LexicalTable(probs)

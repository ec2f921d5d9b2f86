"""End-to-end training and on-disk layout of the statistical model.

A model directory holds:

    phrase_table.txt   "src ||| tgt ||| 4 scores" lines
    lm.arpa            trigram language model
    weights.json       decoder feature weights
    reordering.json    orientation probabilities
    lexical_fwd.txt    t(target | source) word table
    lexical_rev.txt    t(source | target) word table
    meta.json          direction, phrase length cap, format version
"""

import json
import os
from dataclasses import dataclass

from mtloop.corpus import ParallelCorpus, TokenSeq
from mtloop.smt.decoder import SmtHypothesis, SmtWeights, decode
from mtloop.smt.lexical import LexicalTable, train_lexical
from mtloop.smt.lm import NGramLM, read_arpa, train_lm, write_arpa
from mtloop.smt.phrases import (
    DEFAULT_MAX_PHRASE_LEN,
    PhraseTable,
    build_phrase_table,
    read_phrase_table,
    write_phrase_table,
)

FORMAT_VERSION = 1


@dataclass
class SmtModel:
    table: PhraseTable
    lm: NGramLM
    weights: SmtWeights
    reordering: dict[str, float]
    lex_fwd: LexicalTable
    lex_rev: LexicalTable
    direction: str = "chr-en"
    max_phrase_len: int = DEFAULT_MAX_PHRASE_LEN

    def decode(self, source: TokenSeq, beam: int = 50,
               distortion_limit: int | None = 6) -> SmtHypothesis:
        return decode(source, self.table, self.lm, self.weights,
                      beam=beam, distortion_limit=distortion_limit,
                      reordering=self.reordering)


def train_smt(
    corpus: ParallelCorpus,
    em_iterations: int = 5,
    max_phrase_len: int = DEFAULT_MAX_PHRASE_LEN,
    lm_discount: float = 0.75,
    weights: SmtWeights | None = None,
) -> SmtModel:
    """Train lexical tables, phrase table, reordering stats, and the LM."""
    lex_fwd = train_lexical(corpus, em_iterations)
    lex_rev = train_lexical(corpus, em_iterations, reverse=True)
    table, reordering = build_phrase_table(corpus, lex_fwd, lex_rev, max_phrase_len)
    lm = train_lm(corpus.targets(), discount=lm_discount)
    return SmtModel(
        table=table,
        lm=lm,
        weights=weights or SmtWeights(),
        reordering=reordering,
        lex_fwd=lex_fwd,
        lex_rev=lex_rev,
        direction=corpus.direction,
        max_phrase_len=max_phrase_len,
    )


def save_model(model: SmtModel, model_dir) -> None:
    os.makedirs(model_dir, exist_ok=True)
    write_phrase_table(model.table, os.path.join(model_dir, "phrase_table.txt"))
    write_arpa(model.lm, os.path.join(model_dir, "lm.arpa"))
    model.lex_fwd.save(os.path.join(model_dir, "lexical_fwd.txt"))
    model.lex_rev.save(os.path.join(model_dir, "lexical_rev.txt"))
    with open(os.path.join(model_dir, "weights.json"), "w", encoding="utf-8") as fh:
        json.dump({"v": FORMAT_VERSION, **model.weights.to_dict()}, fh, indent=2)
    with open(os.path.join(model_dir, "reordering.json"), "w", encoding="utf-8") as fh:
        json.dump({"v": FORMAT_VERSION, **model.reordering}, fh, indent=2)
    with open(os.path.join(model_dir, "meta.json"), "w", encoding="utf-8") as fh:
        json.dump(
            {
                "v": FORMAT_VERSION,
                "direction": model.direction,
                "max_phrase_len": model.max_phrase_len,
            },
            fh,
            indent=2,
        )


def load_model(model_dir) -> SmtModel:
    with open(os.path.join(model_dir, "meta.json"), encoding="utf-8") as fh:
        meta = json.load(fh)
    with open(os.path.join(model_dir, "weights.json"), encoding="utf-8") as fh:
        wdata = json.load(fh)
        wdata.pop("v", None)
    with open(os.path.join(model_dir, "reordering.json"), encoding="utf-8") as fh:
        rdata = json.load(fh)
        rdata.pop("v", None)
    return SmtModel(
        table=read_phrase_table(os.path.join(model_dir, "phrase_table.txt"),
                                meta["max_phrase_len"]),
        lm=read_arpa(os.path.join(model_dir, "lm.arpa")),
        weights=SmtWeights.from_dict(wdata),
        reordering=rdata,
        lex_fwd=LexicalTable.load(os.path.join(model_dir, "lexical_fwd.txt")),
        lex_rev=LexicalTable.load(os.path.join(model_dir, "lexical_rev.txt")),
        direction=meta["direction"],
        max_phrase_len=meta["max_phrase_len"],
    )

"""Miniature phrase-based statistical translation.

Lexical probabilities come from expectation-maximization over the
parallel corpus, phrases from alignment-consistent extraction, the
language model from interpolated Kneser-Ney counts, and translations
from stack decoding over six weighted feature scores.
"""

from mtloop.smt.decoder import SmtHypothesis, SmtWeights, decode
from mtloop.smt.lexical import LexicalTable, align, train_lexical, viterbi_links
from mtloop.smt.lm import NGramLM, read_arpa, train_lm, write_arpa
from mtloop.smt.model import SmtModel, load_model, save_model, train_smt
from mtloop.smt.phrases import (
    PhraseOption,
    PhraseTable,
    build_phrase_table,
    extract_phrases,
    read_phrase_table,
    write_phrase_table,
)
from mtloop.smt.tuning import tune_weights

__all__ = [
    "LexicalTable",
    "NGramLM",
    "PhraseOption",
    "PhraseTable",
    "SmtHypothesis",
    "SmtModel",
    "SmtWeights",
    "align",
    "build_phrase_table",
    "decode",
    "extract_phrases",
    "load_model",
    "read_arpa",
    "read_phrase_table",
    "save_model",
    "train_lexical",
    "train_lm",
    "train_smt",
    "tune_weights",
    "viterbi_links",
    "write_arpa",
    "write_phrase_table",
]

"""Start a fully-wired backend on a throwaway port for the UI tests.

Trains tiny models in a temp directory, seeds one example input, and
serves until killed. Prints READY <port> once the app is up.
"""

import argparse
import sys
import tempfile

import uvicorn

from mtloop.corpus import make_corpus
from mtloop.dictionary import DictEntry, build_index
from mtloop.feedback import FeedbackStore
from mtloop.qe.dataset import build_kfold_dataset
from mtloop.qe.features import smt_features
from mtloop.qe.gbt import gbt_train
from mtloop.service import ModelRegistry, ServiceConfig, create_app, nmt_ensemble_from_lexical
from mtloop.smt.model import train_smt

PAIRS = [
    ("ka nu", "the cat"),
    ("ka wo", "the dog"),
    ("nu tsi", "cat runs"),
    ("wo tsi", "dog runs"),
    ("ka nu tsi", "the cat runs"),
    ("ka wo tsi", "the dog runs"),
    ("nu", "cat"),
    ("wo", "dog"),
]


def build_registry() -> ModelRegistry:
    registry = ModelRegistry()
    for direction in ("chr-en", "en-chr"):
        corpus = make_corpus(PAIRS, "chr-en")
        if direction == "en-chr":
            corpus = corpus.flipped()
        model = train_smt(corpus, em_iterations=5)

        def trainer(sub_corpus):
            trained = train_smt(sub_corpus, em_iterations=3)
            return lambda src: trained.decode(src, beam=10)

        dataset = build_kfold_dataset(corpus, k=2, trainer=trainer, featurizer=smt_features)
        registry.set_smt(direction, model, gbt_train(dataset, max_depth=2, eta=0.3, rounds=10))
        registry.set_nmt(direction, nmt_ensemble_from_lexical(model.lex_fwd))
    return registry


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--port", type=int, required=True)
    parser.add_argument("--expert-token", default="e2e-expert-token")
    args = parser.parse_args()

    data_dir = tempfile.mkdtemp(prefix="mtloop-e2e-")
    store = FeedbackStore(data_dir)
    store.add_example("chr", "ka nu tsi")
    store.add_example("en", "the dog runs")
    dictionary = build_index(
        [
            DictEntry("ka", "chr", "the"),
            DictEntry("nu", "chr", "cat"),
            DictEntry("cat", "en", "small feline"),
            DictEntry("dog", "en", "canine"),
        ]
    )
    config = ServiceConfig(data_dir=data_dir, expert_tokens=(args.expert_token,))
    app = create_app(config, registry=build_registry(), store=store, dictionary=dictionary)

    print(f"READY {args.port}", flush=True)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")


if __name__ == "__main__":
    main()

"""Command-line entry points: serve, smt, qe, hitl, bleu."""

import json
import os
import sys

import click

from mtloop.corpus import load_pairs
from mtloop.feedback import FeedbackStore
from mtloop.hitl import ArchaicMap, RetrainPipeline, retrain
from mtloop.nmt import beam_search, toy_decoder
from mtloop.qe.dataset import build_kfold_dataset, load_dataset, save_dataset
from mtloop.qe.features import evaluate_qe, nmt_features, smt_features
from mtloop.qe.gbt import gbt_train, save_gbt
from mtloop.smt.lexical import train_lexical
from mtloop.smt.model import load_model, save_model, train_smt
from mtloop.smt.tuning import tune_weights
from mtloop.textmetrics import corpus_bleu, sentence_bleu, tokenize_13a


@click.group()
def main():
    """Desk-scale translation loop tools."""


# -- bleu ---------------------------------------------------------------------

@main.command()
@click.option("--hyp", "hyp_file", required=True, type=click.Path(exists=True))
@click.option("--ref", "ref_file", required=True, type=click.Path(exists=True))
@click.option("--sentence", is_flag=True, help="Print one score per line pair.")
def bleu(hyp_file, ref_file, sentence):
    """Score hypotheses against references, one sentence per line."""
    with open(hyp_file, encoding="utf-8") as fh:
        hyps = [tokenize_13a(line.rstrip("\n")) for line in fh]
    with open(ref_file, encoding="utf-8") as fh:
        refs = [tokenize_13a(line.rstrip("\n")) for line in fh]
    if sentence:
        for hyp, ref in zip(hyps, refs):
            click.echo(f"{sentence_bleu(hyp, [ref]).value:.1f}")
    else:
        click.echo(f"{corpus_bleu(hyps, refs).value:.1f}")


# -- smt ------------------------------------------------------------------------

@main.group()
def smt():
    """Train, tune, and run the statistical translator."""


@smt.command("train")
@click.option("--corpus", "corpus_file", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--direction", default="chr-en", show_default=True)
@click.option("--iterations", default=5, show_default=True)
@click.option("--max-phrase-len", default=4, show_default=True)
def smt_train(corpus_file, out_dir, direction, iterations, max_phrase_len):
    """Train a model from a pair file into a model directory."""
    corpus = load_pairs(corpus_file, direction)
    model = train_smt(corpus, em_iterations=iterations, max_phrase_len=max_phrase_len)
    save_model(model, out_dir)
    click.echo(f"trained on {len(corpus)} pairs -> {out_dir}")


@smt.command("tune")
@click.option("--dev", "dev_file", required=True, type=click.Path(exists=True))
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--grid-points", default=21, show_default=True)
@click.option("--sweeps", default=3, show_default=True)
@click.option("--beam", default=20, show_default=True)
def smt_tune(dev_file, model_dir, grid_points, sweeps, beam):
    """Line-search the feature weights against a development set."""
    model = load_model(model_dir)
    dev = load_pairs(dev_file, model.direction)
    model.weights = tune_weights(
        dev, model.table, model.lm, model.weights, model.reordering,
        grid_points=grid_points, sweeps=sweeps, beam=beam,
    )
    save_model(model, model_dir)
    click.echo(f"tuned weights saved to {model_dir}")


@smt.command("decode")
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--beam", default=50, show_default=True)
@click.option("--distortion", default=6, show_default=True,
              help="Distortion limit; -1 for unlimited.")
def smt_decode(model_dir, beam, distortion):
    """Translate standard-input lines to standard output."""
    model = load_model(model_dir)
    limit = None if distortion < 0 else distortion
    for line in sys.stdin:
        tokens = tokenize_13a(line.rstrip("\n"))
        if not tokens:
            click.echo("")
            continue
        hyp = model.decode(tuple(tokens), beam=beam, distortion_limit=limit)
        click.echo(" ".join(hyp.target))


# -- qe --------------------------------------------------------------------------

def _smt_fold_trainer(iterations, beam):
    def trainer(sub_corpus):
        model = train_smt(sub_corpus, em_iterations=iterations)
        return lambda src: model.decode(src, beam=beam)

    return trainer


def _nmt_fold_trainer(iterations, beam):
    def trainer(sub_corpus):
        decoder = toy_decoder(train_lexical(sub_corpus, iterations))
        return lambda src: beam_search(decoder, src, beam=beam)

    return trainer


@main.group()
def qe():
    """Quality-estimation data building, training, and evaluation."""


@qe.command("build-data")
@click.option("--corpus", "corpus_file", required=True, type=click.Path(exists=True))
@click.option("--k", default=17, show_default=True)
@click.option("--kind", type=click.Choice(["smt", "nmt"]), required=True)
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--direction", default="chr-en", show_default=True)
@click.option("--iterations", default=5, show_default=True)
@click.option("--beam", default=20, show_default=True)
def qe_build_data(corpus_file, k, kind, out_file, direction, iterations, beam):
    """Cross-decode the corpus into (features, sentence BLEU) rows."""
    corpus = load_pairs(corpus_file, direction)
    if kind == "smt":
        trainer, featurizer = _smt_fold_trainer(iterations, beam), smt_features
    else:
        trainer, featurizer = _nmt_fold_trainer(iterations, beam), nmt_features
    dataset = build_kfold_dataset(corpus, k, trainer, featurizer)
    save_dataset(dataset, out_file)
    click.echo(f"{len(dataset)} rows ({kind}, k={k}) -> {out_file}")


@qe.command("train")
@click.option("--data", "data_file", required=True, type=click.Path(exists=True))
@click.option("--depth", default=5, show_default=True)
@click.option("--eta", default=0.1, show_default=True)
@click.option("--rounds", default=100, show_default=True)
@click.option("--out", "out_file", required=True, type=click.Path())
def qe_train(data_file, depth, eta, rounds, out_file):
    dataset = load_dataset(data_file)
    model = gbt_train(dataset, max_depth=depth, eta=eta, rounds=rounds)
    save_gbt(model, out_file)
    click.echo(
        f"trained {model.kind} regressor (depth={depth}, eta={eta}, rounds={rounds}) "
        f"-> {out_file}"
    )


@qe.command("eval")
@click.option("--pred", "pred_file", required=True, type=click.Path(exists=True))
@click.option("--gold", "gold_file", required=True, type=click.Path(exists=True))
def qe_eval(pred_file, gold_file):
    """Pearson correlation between one-number-per-line files."""
    with open(pred_file, encoding="utf-8") as fh:
        pred = [float(line) for line in fh if line.strip()]
    with open(gold_file, encoding="utf-8") as fh:
        gold = [float(line) for line in fh if line.strip()]
    result = evaluate_qe(pred, gold)
    click.echo(f"pearson={result.r:.4f} n={result.n}")


# -- hitl -------------------------------------------------------------------------

def _load_archaic_map(path) -> ArchaicMap:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return ArchaicMap(tuple((k, v) for k, v in data))


@main.group()
def hitl():
    """Human-in-the-loop retraining."""


@hitl.command("retrain")
@click.option("--data", "data_dir", required=True, type=click.Path(exists=True),
              help="Directory with train.pairs, the feedback store, and models/.")
@click.option("--dev", "dev_file", required=True, type=click.Path(exists=True))
@click.option("--direction", default="chr-en", show_default=True)
@click.option("--repeat", default=1, type=click.Choice(["1", "5", "10"]), show_default=True)
@click.option("--archaic-map", "archaic_file", type=click.Path(exists=True))
@click.option("--iterations", default=5, show_default=True)
@click.option("--qe-folds", default=0, show_default=True,
              help="Rebuild the quality regressor with this many folds (0 skips).")
def hitl_retrain(data_dir, dev_file, direction, repeat, archaic_file, iterations, qe_folds):
    """Fold expert corrections back in; swap the model if dev BLEU holds."""
    train = load_pairs(os.path.join(data_dir, "train.pairs"), direction)
    dev = load_pairs(dev_file, direction)
    store = FeedbackStore(data_dir)
    corrections = store.export_corrections(direction=direction, dedup=True)
    archaic = _load_archaic_map(archaic_file) if archaic_file else ArchaicMap()

    pipeline = RetrainPipeline(
        train=train,
        em_iterations=iterations,
        qe_folds=qe_folds or None,
    )
    out_dir = os.path.join(data_dir, "models", direction)

    def on_swap(model, qe_model):
        save_model(model, out_dir)
        if qe_model is not None:
            save_gbt(qe_model, os.path.join(out_dir, "qe_smt.json"))

    report, _ = retrain(pipeline, dev, corrections, repeat=int(repeat),
                        archaic=archaic, on_swap=on_swap)
    click.echo(json.dumps(report.__dict__, indent=2))
    if report.error:
        raise SystemExit(1)
    click.echo(
        f"dev BLEU {report.bleu_before:.1f} -> {report.bleu_after:.1f} "
        f"({report.corrections_used} corrections x{report.repeat_factor}; "
        f"{'swapped' if report.swapped else 'kept old model'})"
    )


# -- serve --------------------------------------------------------------------------

@main.command()
@click.option("--port", default=None, type=int, help="Overrides MTLOOP_PORT.")
@click.option("--host", default="0.0.0.0", show_default=True)
def serve(port, host):
    """Run the HTTP service using MTLOOP_* environment configuration."""
    import uvicorn

    from mtloop.service import ServiceConfig, create_app

    config = ServiceConfig.from_env()
    if port is not None:
        config.port = port
    uvicorn.run(create_app(config), host=host, port=config.port, log_level="info")


if __name__ == "__main__":
    main()

"""Quality estimation: features, BLEU regression, and star rescaling."""

from mtloop.qe.dataset import QEDataset, build_kfold_dataset, load_dataset, save_dataset
from mtloop.qe.features import (
    NMT_FEATURE_DIM,
    SMT_FEATURE_DIM,
    QEFeatureVector,
    attention_entropy,
    evaluate_qe,
    nmt_features,
    smt_features,
    stars_from_bleu,
    stars_from_prob,
)
from mtloop.qe.gbt import GradientBoostedEnsemble, gbt_predict, gbt_train, load_gbt, save_gbt

__all__ = [
    "GradientBoostedEnsemble",
    "NMT_FEATURE_DIM",
    "QEDataset",
    "QEFeatureVector",
    "SMT_FEATURE_DIM",
    "attention_entropy",
    "build_kfold_dataset",
    "evaluate_qe",
    "gbt_predict",
    "gbt_train",
    "load_dataset",
    "load_gbt",
    "nmt_features",
    "save_dataset",
    "save_gbt",
    "smt_features",
    "stars_from_bleu",
    "stars_from_prob",
]

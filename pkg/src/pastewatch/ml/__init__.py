"""Trainable classifiers: the 1D CNN plus four baselines, with random
hyperparameter search and versioned weight serialization."""

from .baselines import (BASELINE_KINDS, GaussianNBModel, LinearSVMModel,
                        LogisticRegressionModel, RandomForestModel,
                        make_baseline)
from .cnn import (CnnSpec, ModelParams, PredictionOutcome, TrainConfig,
                  forward, gradients, init_params, loss, predict,
                  predict_proba, spec_for, train)
from .serialize import load_model, save_model
from .tuning import TrialResult, tune_hyperparameters

MODEL_KINDS = ("cnn",) + tuple(sorted(BASELINE_KINDS))

__all__ = [
    "BASELINE_KINDS", "MODEL_KINDS", "CnnSpec", "ModelParams",
    "PredictionOutcome", "TrainConfig", "TrialResult",
    "GaussianNBModel", "LinearSVMModel", "LogisticRegressionModel",
    "RandomForestModel", "make_baseline", "forward", "gradients",
    "init_params", "loss", "predict", "predict_proba", "spec_for", "train",
    "load_model", "save_model", "tune_hyperparameters",
]


def fit_model(kind: str, X, y, seed: int = 0, config: TrainConfig = None):
    """Train any supported model kind; returns an object exposing
    predict_proba (and, for the CNN, the underlying ModelParams)."""
    if kind == "cnn":
        params, history = train(X, y, config or TrainConfig(seed=seed))
        return CnnClassifier(params), history
    model = make_baseline(kind, seed=seed).fit(X, y)
    return model, None


class CnnClassifier:
    """Adapter giving the CNN the same predict surface as the baselines."""

    def __init__(self, params: ModelParams):
        self.params = params

    def predict_proba(self, X):
        return predict_proba(self.params, X)

    def predict(self, x, threshold: float = 0.5) -> PredictionOutcome:
        return predict(self.params, x, threshold)


def load_classifier(path, catalog_version: str = "v1"):
    kind, model = load_model(path, catalog_version)
    if kind == "cnn":
        return kind, CnnClassifier(model)
    return kind, model

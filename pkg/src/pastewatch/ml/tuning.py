"""Random hyperparameter search for the CNN.

Each trial samples batch size in [10, 256], transposed-conv size in
[16, 256], dropout in [0, 0.5], and dense size in [5, 256]; the conv
layer stays fixed at 32 units. Every trial trains for 3 epochs and the
configuration with the lowest final-epoch loss wins."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cnn import TrainConfig, spec_for, train

BATCH_RANGE = (10, 256)
DECONV_RANGE = (16, 256)
DROPOUT_RANGE = (0.0, 0.5)
DENSE_RANGE = (5, 256)
TUNE_EPOCHS = 3


@dataclass(frozen=True)
class TrialResult:
    batch_size: int
    deconv_units: int
    dropout_rate: float
    dense_units: int
    final_loss: float


def sample_trial(rng: random.Random):
    return {
        "batch_size": rng.randint(*BATCH_RANGE),
        "deconv_units": rng.randint(*DECONV_RANGE),
        "dropout_rate": rng.uniform(*DROPOUT_RANGE),
        "dense_units": rng.randint(*DENSE_RANGE),
    }


def tune_hyperparameters(X, y, trials: int, seed: int,
                         learning_rate: float = 0.01, objective=None):
    """Returns (best TrialResult, full trial log). objective, when given,
    replaces training and maps a sampled configuration dict to a loss
    (used for testing the search itself)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    log = []
    for t in range(trials):
        cfg = sample_trial(rng)
        if objective is not None:
            final = float(objective(cfg))
        else:
            spec = spec_for(deconv_units=cfg["deconv_units"],
                            dropout_rate=cfg["dropout_rate"],
                            dense_units=cfg["dense_units"])
            config = TrainConfig(epochs=TUNE_EPOCHS,
                                 batch_size=cfg["batch_size"],
                                 learning_rate=learning_rate, seed=seed + t)
            _, history = train(X, y, config, spec=spec)
            final = history[-1]
        log.append(TrialResult(final_loss=final, **cfg))
    best = min(log, key=lambda r: r.final_loss)
    return best, log

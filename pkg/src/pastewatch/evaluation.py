"""Evaluation harness: precision/recall/F1, PR-AUC, out-of-sample
bootstrap validation, McNemar tests with Bonferroni correction and odds
ratios, and a 2-component PCA projection for cluster plots."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateCovariance, DegenerateDataset,
                     DegenerateLabels, EmptyOutOfBag)
from .ml import fit_model

DEFAULT_ALPHA = 0.05
DEFAULT_ITERATIONS = 100


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn

    @classmethod
    def from_predictions(cls, preds, labels):
        preds = np.asarray(preds).astype(bool)
        labels = np.asarray(labels).astype(bool)
        return cls(tp=int((preds & labels).sum()),
                   fp=int((preds & ~labels).sum()),
                   fn=int((~preds & labels).sum()),
                   tn=int((~preds & ~labels).sum()))


@dataclass(frozen=True)
class McNemarResult:
    b: int
    c: int
    statistic: float
    p_value: float
    odds_ratio: float
    adjusted_alpha: float
    no_discordant_pairs: bool = False

    @property
    def significant(self):
        return (not self.no_discordant_pairs
                and self.p_value < self.adjusted_alpha)


def prf(counts: ConfusionCounts):
    """(precision, recall, f1), with the 0/0 -> 0 convention."""
    def _ratio(num, den):
        return num / den if den else 0.0
    precision = _ratio(counts.tp, counts.tp + counts.fp)
    recall = _ratio(counts.tp, counts.tp + counts.fn)
    f1 = _ratio(2 * precision * recall, precision + recall)
    return precision, recall, f1


def pr_auc(scores):
    """Area under the precision-recall curve, trapezoidal in recall.

    scores is a sequence of (probability, label) pairs; every distinct
    probability acts as a threshold."""
    pairs = [(float(p), int(l)) for p, l in scores]
    positives = sum(l for _, l in pairs)
    if positives == 0 or positives == len(pairs):
        raise DegenerateLabels("PR-AUC needs both labels present")
    pairs.sort(key=lambda pl: -pl[0])
    area = 0.0
    prev_recall = 0.0
    prev_precision = None
    tp = fp = 0
    i = 0
    while i < len(pairs):
        # consume the whole tie group so each threshold appears once
        threshold = pairs[i][0]
        while i < len(pairs) and pairs[i][0] == threshold:
            tp += pairs[i][1]
            fp += 1 - pairs[i][1]
            i += 1
        precision = tp / (tp + fp)
        recall = tp / positives
        if prev_precision is None:
            prev_precision = precision  # anchor the curve at recall 0
        area += (recall - prev_recall) * (precision + prev_precision) / 2.0
        prev_recall, prev_precision = recall, precision
    return area


@dataclass(frozen=True)
class IterationReport:
    precision: float
    recall: float
    f1: float
    pr_auc: float
    oob_fraction: float


@dataclass(frozen=True)
class BootstrapReport:
    iterations: tuple
    mean: IterationReport
    ci_low: IterationReport
    ci_high: IterationReport


_MAX_RESAMPLES = 100


def bootstrap_validate(X, y, kind="cnn", iterations=DEFAULT_ITERATIONS,
                       seed=0, threshold=0.5, fit=None):
    """Out-of-sample bootstrap: each iteration trains on an n-sized
    resample with replacement and evaluates on the out-of-bag rows.

    fit, when given, replaces model training; it maps (X, y, seed) to an
    object exposing predict_proba (used for oracle stubs in tests)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).reshape(-1).astype(int)
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if len(np.unique(y)) < 2:
        raise DegenerateDataset("bootstrap needs both classes")
    n = len(y)
    reports = []
    for it in range(iterations):
        rng = np.random.default_rng([seed, it])
        for _ in range(_MAX_RESAMPLES):
            train_idx = rng.integers(0, n, size=n)
            oob_mask = np.ones(n, dtype=bool)
            oob_mask[train_idx] = False
            if oob_mask.any() and len(np.unique(y[train_idx])) == 2 \
                    and len(np.unique(y[oob_mask])) == 2:
                break
        else:
            raise EmptyOutOfBag(
                f"iteration {it}: no usable out-of-bag split after "
                f"{_MAX_RESAMPLES} resamples")
        if fit is not None:
            model = fit(X[train_idx], y[train_idx], seed + it)
        else:
            model, _ = fit_model(kind, X[train_idx], y[train_idx],
                                 seed=seed + it)
        probs = model.predict_proba(X[oob_mask])
        labels = y[oob_mask]
        counts = ConfusionCounts.from_predictions(probs >= threshold, labels)
        p, r, f1 = prf(counts)
        auc = pr_auc(list(zip(probs, labels)))
        reports.append(IterationReport(
            precision=p, recall=r, f1=f1, pr_auc=auc,
            oob_fraction=oob_mask.mean()))
    matrix = np.array([[r.precision, r.recall, r.f1, r.pr_auc,
                        r.oob_fraction] for r in reports])
    mean = IterationReport(*matrix.mean(axis=0))
    lo = IterationReport(*np.percentile(matrix, 2.5, axis=0))
    hi = IterationReport(*np.percentile(matrix, 97.5, axis=0))
    return BootstrapReport(iterations=tuple(reports), mean=mean,
                           ci_low=lo, ci_high=hi)


def chi2_sf_df1(x):
    """Survival function of the chi-square distribution with df = 1."""
    if x < 0:
        raise ValueError("chi-square statistic must be nonnegative")
    return math.erfc(math.sqrt(x / 2.0))


def mcnemar(preds_a, preds_b, labels, comparisons=1,
            alpha=DEFAULT_ALPHA) -> McNemarResult:
    """Continuity-corrected McNemar test on paired predictions.

    b counts examples A got right and B got wrong; c the reverse. The
    reported alpha is Bonferroni-adjusted for `comparisons` tests."""
    preds_a = np.asarray(preds_a).astype(bool).reshape(-1)
    preds_b = np.asarray(preds_b).astype(bool).reshape(-1)
    labels = np.asarray(labels).astype(bool).reshape(-1)
    if not (len(preds_a) == len(preds_b) == len(labels)):
        raise ValueError("prediction vectors must align with labels")
    if comparisons < 1:
        raise ValueError("comparisons must be >= 1")
    correct_a = preds_a == labels
    correct_b = preds_b == labels
    b = int((correct_a & ~correct_b).sum())
    c = int((~correct_a & correct_b).sum())
    adjusted = alpha / comparisons
    if b == 0 and c == 0:
        return McNemarResult(b=0, c=0, statistic=0.0, p_value=1.0,
                             odds_ratio=1.0, adjusted_alpha=adjusted,
                             no_discordant_pairs=True)
    statistic = (abs(b - c) - 1) ** 2 / (b + c)
    p = chi2_sf_df1(statistic)
    odds = math.inf if c == 0 else b / c
    return McNemarResult(b=b, c=c, statistic=statistic, p_value=p,
                         odds_ratio=odds, adjusted_alpha=adjusted)


def bonferroni_alpha(comparisons, alpha=DEFAULT_ALPHA):
    if comparisons < 1:
        raise ValueError("comparisons must be >= 1")
    return alpha / comparisons


_POWER_ITERATIONS = 500
_POWER_TOL = 1e-12


def _leading_eigenvector(cov, rng):
    v = rng.normal(size=cov.shape[0])
    v /= np.linalg.norm(v)
    value = 0.0
    for _ in range(_POWER_ITERATIONS):
        w = cov @ v
        norm = np.linalg.norm(w)
        if norm < _POWER_TOL:
            return v, 0.0
        w /= norm
        if np.linalg.norm(w - v) < _POWER_TOL:
            return w, norm
        v = w
        value = norm
    return v, value


def pca_project(vectors, components=2, seed=0):
    """Standardize, then project onto the top principal axes found by
    power iteration with deflation.

    Returns (points, explained, axes): points is n x components,
    explained the per-axis fraction of total variance, axes the
    orthonormal component rows."""
    X = np.asarray([tuple(v) for v in vectors], dtype=float)
    if X.ndim != 2 or len(X) < 3:
        raise ValueError("need at least 3 vectors")
    centered = X - X.mean(axis=0)
    std = X.std(axis=0)
    if not std.any():
        raise DegenerateCovariance("all points identical")
    std[std == 0] = 1.0
    Z = centered / std
    cov = (Z.T @ Z) / (len(Z) - 1)
    total_variance = np.trace(cov)
    rng = np.random.default_rng(seed)
    axes = []
    explained = []
    work = cov.copy()
    for _ in range(components):
        v, value = _leading_eigenvector(work, rng)
        # re-orthogonalize against earlier axes to stop drift
        for u in axes:
            v = v - (v @ u) * u
        norm = np.linalg.norm(v)
        if norm < _POWER_TOL:
            raise DegenerateCovariance("covariance rank below components")
        v /= norm
        axes.append(v)
        explained.append(value / total_variance if total_variance else 0.0)
        work = work - value * np.outer(v, v)
    axes = np.array(axes)
    return Z @ axes.T, np.array(explained), axes

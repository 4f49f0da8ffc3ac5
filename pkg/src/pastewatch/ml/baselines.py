"""Baseline classifiers written from scratch on numpy: logistic
regression (BCE + SGD), Gaussian naive Bayes, random forest (bagged CART
with Gini splits), and a linear SVM (hinge + L2 via SGD) whose margins
are mapped through a fitted sigmoid so it can report probabilities."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateDataset
from .cnn import PredictionOutcome, _sigmoid

VAR_SMOOTHING = 1e-9


def _check_two_classes(y):
    if len(np.unique(y)) < 2:
        raise DegenerateDataset("training data must contain both classes")


class _Standardizer:
    def fit(self, X):
        self.mean = X.mean(axis=0)
        self.std = X.std(axis=0)
        self.std[self.std == 0] = 1.0
        return self

    def transform(self, X):
        return (X - self.mean) / self.std

    def state(self):
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_state(cls, s):
        out = cls()
        out.mean = np.asarray(s["mean"])
        out.std = np.asarray(s["std"])
        return out


class LogisticRegressionModel:
    def __init__(self, epochs=40, batch_size=32, learning_rate=0.1, seed=0):
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float).reshape(-1)
        _check_two_classes(y)
        self.scaler = _Standardizer().fit(X)
        Z = self.scaler.transform(X)
        rng = np.random.default_rng(self.seed)
        n, d = Z.shape
        self.w = np.zeros(d)
        self.b = 0.0
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for start in range(0, n, self.batch_size):
                idx = order[start:start + self.batch_size]
                p = _sigmoid(Z[idx] @ self.w + self.b)
                err = p - y[idx]
                self.w -= self.learning_rate * (Z[idx].T @ err) / len(idx)
                self.b -= self.learning_rate * err.mean()
        return self

    def predict_proba(self, X):
        Z = self.scaler.transform(np.asarray(X, dtype=float))
        return _sigmoid(Z @ self.w + self.b)

    def predict(self, x, threshold=0.5) -> PredictionOutcome:
        p = self.predict_proba(np.atleast_2d(x))[0]
        return PredictionOutcome.from_probability(p, threshold)

    def state(self):
        return {"w": self.w.tolist(), "b": self.b,
                "scaler": self.scaler.state()}

    def load_state(self, s):
        self.w = np.asarray(s["w"])
        self.b = float(s["b"])
        self.scaler = _Standardizer.from_state(s["scaler"])
        return self


class GaussianNBModel:
    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y).reshape(-1).astype(int)
        _check_two_classes(y)
        self.classes = np.array([0, 1])
        smoothing = VAR_SMOOTHING * X.var(axis=0).max()
        self.theta = np.stack([X[y == c].mean(axis=0) for c in self.classes])
        self.var = np.stack([X[y == c].var(axis=0) for c in self.classes]) \
            + max(smoothing, VAR_SMOOTHING)
        self.priors = np.array([(y == c).mean() for c in self.classes])
        return self

    def _joint_log_likelihood(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        jll = []
        for i in range(2):
            log_prob = -0.5 * np.sum(
                np.log(2.0 * np.pi * self.var[i])
                + (X - self.theta[i]) ** 2 / self.var[i], axis=1)
            jll.append(np.log(self.priors[i]) + log_prob)
        return np.stack(jll, axis=1)

    def predict_proba(self, X):
        jll = self._joint_log_likelihood(X)
        m = jll.max(axis=1, keepdims=True)
        e = np.exp(jll - m)
        return e[:, 1] / e.sum(axis=1)

    def predict(self, x, threshold=0.5) -> PredictionOutcome:
        return PredictionOutcome.from_probability(
            self.predict_proba(np.atleast_2d(x))[0], threshold)

    def state(self):
        return {"theta": self.theta.tolist(), "var": self.var.tolist(),
                "priors": self.priors.tolist()}

    def load_state(self, s):
        self.theta = np.asarray(s["theta"])
        self.var = np.asarray(s["var"])
        self.priors = np.asarray(s["priors"])
        return self


class LinearSVMModel:
    """Hinge loss + L2 regularization via SGD; probabilities come from a
    sigmoid fitted on the training margins (Platt-style)."""

    def __init__(self, epochs=40, batch_size=32, learning_rate=0.05,
                 l2=1e-3, seed=0):
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.l2 = l2
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y).reshape(-1)
        _check_two_classes(y)
        self.scaler = _Standardizer().fit(X)
        Z = self.scaler.transform(X)
        s = np.where(y > 0, 1.0, -1.0)
        rng = np.random.default_rng(self.seed)
        n, d = Z.shape
        self.w = np.zeros(d)
        self.b = 0.0
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for start in range(0, n, self.batch_size):
                idx = order[start:start + self.batch_size]
                margin = s[idx] * (Z[idx] @ self.w + self.b)
                active = margin < 1.0
                gw = self.l2 * self.w - (
                    s[idx, None] * Z[idx] * active[:, None]).sum(0) / len(idx)
                gb = -(s[idx] * active).sum() / len(idx)
                self.w -= self.learning_rate * gw
                self.b -= self.learning_rate * gb
        self._fit_calibration(Z @ self.w + self.b, y)
        return self

    def _fit_calibration(self, margins, y):
        # 1-D logistic regression on the margin
        a, b = 1.0, 0.0
        for _ in range(200):
            p = _sigmoid(a * margins + b)
            err = p - y
            a -= 0.1 * (err * margins).mean()
            b -= 0.1 * err.mean()
        self.cal_a, self.cal_b = float(a), float(b)

    def decision_function(self, X):
        Z = self.scaler.transform(np.asarray(X, dtype=float))
        return Z @ self.w + self.b

    def predict_proba(self, X):
        return _sigmoid(self.cal_a * self.decision_function(X) + self.cal_b)

    def predict(self, x, threshold=0.5) -> PredictionOutcome:
        return PredictionOutcome.from_probability(
            self.predict_proba(np.atleast_2d(x))[0], threshold)

    def state(self):
        return {"w": self.w.tolist(), "b": self.b, "cal_a": self.cal_a,
                "cal_b": self.cal_b, "scaler": self.scaler.state()}

    def load_state(self, s):
        self.w = np.asarray(s["w"])
        self.b = float(s["b"])
        self.cal_a = float(s["cal_a"])
        self.cal_b = float(s["cal_b"])
        self.scaler = _Standardizer.from_state(s["scaler"])
        return self


def _gini_best_split(X, y, feature_indices, min_leaf=1):
    """Best (feature, threshold, gain) over candidate features, or None."""
    n = len(y)
    total_pos = y.sum()
    parent_gini = 1.0 - ((total_pos / n) ** 2 + ((n - total_pos) / n) ** 2)
    best = None
    for f in feature_indices:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        ys = y[order]
        pos_left = np.cumsum(ys)[:-1]
        n_left = np.arange(1, n)
        valid = xs[1:] != xs[:-1]
        if min_leaf > 1:
            valid &= (n_left >= min_leaf) & (n - n_left >= min_leaf)
        if not valid.any():
            continue
        n_right = n - n_left
        pos_right = total_pos - pos_left
        gini_l = 1.0 - ((pos_left / n_left) ** 2
                        + ((n_left - pos_left) / n_left) ** 2)
        gini_r = 1.0 - ((pos_right / n_right) ** 2
                        + ((n_right - pos_right) / n_right) ** 2)
        weighted = (n_left * gini_l + n_right * gini_r) / n
        weighted[~valid] = np.inf
        k = int(np.argmin(weighted))
        gain = parent_gini - weighted[k]
        if gain > 1e-12 and (best is None or gain > best[2]):
            threshold = 0.5 * (xs[k] + xs[k + 1])
            best = (int(f), float(threshold), float(gain))
    return best


def _build_tree(X, y, rng, max_depth, mtry, depth=0):
    n = len(y)
    pos = float(y.sum())
    prob = pos / n
    if depth >= max_depth or prob in (0.0, 1.0) or n < 2:
        return {"leaf": prob}
    feats = rng.choice(X.shape[1], size=min(mtry, X.shape[1]), replace=False)
    split = _gini_best_split(X, y, feats)
    if split is None:
        return {"leaf": prob}
    f, thr, _ = split
    mask = X[:, f] <= thr
    return {
        "feature": f, "threshold": thr,
        "left": _build_tree(X[mask], y[mask], rng, max_depth, mtry,
                            depth + 1),
        "right": _build_tree(X[~mask], y[~mask], rng, max_depth, mtry,
                             depth + 1),
    }


def _tree_predict(tree, x):
    while "leaf" not in tree:
        tree = tree["left"] if x[tree["feature"]] <= tree["threshold"] \
            else tree["right"]
    return tree["leaf"]


class RandomForestModel:
    def __init__(self, n_trees=100, max_depth=16, mtry=None, seed=0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.mtry = mtry
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float).reshape(-1)
        _check_two_classes(y)
        n, d = X.shape
        mtry = self.mtry or max(1, int(np.sqrt(d)))
        self.trees = []
        for t in range(self.n_trees):
            # per-tree seed so tree construction order is irrelevant
            rng = np.random.default_rng(self.seed * 100003 + t)
            idx = rng.integers(0, n, size=n)
            self.trees.append(_build_tree(X[idx], y[idx], rng,
                                          self.max_depth, mtry))
        return self

    def predict_proba(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        votes = np.array([[_tree_predict(t, x) for t in self.trees]
                          for x in X])
        return votes.mean(axis=1)

    def predict(self, x, threshold=0.5) -> PredictionOutcome:
        return PredictionOutcome.from_probability(
            self.predict_proba(np.atleast_2d(x))[0], threshold)

    def state(self):
        return {"trees": self.trees}

    def load_state(self, s):
        self.trees = s["trees"]
        return self


BASELINE_KINDS = {
    "lr": LogisticRegressionModel,
    "nb": GaussianNBModel,
    "svm": LinearSVMModel,
    "rf": RandomForestModel,
}


def make_baseline(kind: str, seed: int = 0):
    cls = BASELINE_KINDS[kind]
    if kind == "nb":
        return cls()
    return cls(seed=seed)

import numpy as np
import pytest

from pastewatch.errors import CorruptModel, DegenerateDataset, SchemaMismatch
from pastewatch.ml import (CnnSpec, TrainConfig, fit_model, init_params,
                           load_classifier, load_model, make_baseline,
                           predict_proba, save_model, train,
                           tune_hyperparameters)
from pastewatch.ml.baselines import (GaussianNBModel, LinearSVMModel,
                                     LogisticRegressionModel,
                                     RandomForestModel)


def test_gaussian_nb_boundary_on_two_gaussians():
    rng = np.random.default_rng(0)
    n = 4000
    y = rng.integers(0, 2, size=n)
    X = rng.normal(size=(n, 1)) + y[:, None] * 10.0
    model = GaussianNBModel().fit(X, y)
    # scan for the decision boundary
    grid = np.linspace(0, 10, 2001)[:, None]
    p = model.predict_proba(grid)
    boundary = grid[np.argmin(np.abs(p - 0.5)), 0]
    assert boundary == pytest.approx(5.0, abs=0.2)


def test_lr_separable_accuracy():
    rng = np.random.default_rng(1)
    n = 500
    y = rng.integers(0, 2, size=n)
    X = rng.normal(size=(n, 2))
    X[:, 0] += y * 8.0
    model = LogisticRegressionModel(seed=3).fit(X, y)
    pred = (model.predict_proba(X) >= 0.5).astype(int)
    assert (pred == y).mean() >= 0.99


def test_rf_single_stump_reproduces_threshold():
    X = np.linspace(0, 1, 40)[:, None]
    y = (X[:, 0] > 0.475).astype(float)
    model = RandomForestModel(n_trees=1, max_depth=1, mtry=1, seed=0)
    # disable bagging noise by fitting a plain stump via the internals
    from pastewatch.ml.baselines import _build_tree
    tree = _build_tree(X, y, np.random.default_rng(0), max_depth=1, mtry=1)
    assert "feature" in tree and tree["feature"] == 0
    # exhaustive oracle: best threshold must sit between the two classes
    assert 0.45 < tree["threshold"] < 0.5
    model.trees = [tree]
    pred = (model.predict_proba(X) >= 0.5).astype(float)
    assert np.array_equal(pred, y)


def test_svm_separable_and_calibrated():
    rng = np.random.default_rng(2)
    n = 400
    y = rng.integers(0, 2, size=n)
    X = rng.normal(size=(n, 3))
    X[:, 1] += y * 6.0
    model = LinearSVMModel(seed=1).fit(X, y)
    p = model.predict_proba(X)
    assert ((p >= 0.5).astype(int) == y).mean() >= 0.99
    assert np.all((p > 0) & (p < 1))


@pytest.mark.parametrize("kind", ["lr", "nb", "svm", "rf"])
def test_degenerate_dataset_rejected(kind):
    X = np.zeros((8, 4))
    y = np.zeros(8)
    with pytest.raises(DegenerateDataset):
        make_baseline(kind).fit(X, y)


@pytest.mark.parametrize("kind", ["lr", "nb", "svm", "rf"])
def test_baseline_save_load_round_trip(kind, tmp_path):
    rng = np.random.default_rng(5)
    y = rng.integers(0, 2, size=200)
    X = rng.normal(size=(200, 78))
    X[:, 3] += y * 5.0
    model = make_baseline(kind, seed=2)
    if kind == "rf":
        model.n_trees = 10
    model.fit(X, y)
    path = tmp_path / "model.json"
    save_model(model, kind, path)
    kind2, loaded = load_classifier(path)
    assert kind2 == kind
    probe = rng.normal(size=(100, 78))
    assert np.array_equal(model.predict_proba(probe),
                          loaded.predict_proba(probe))


def test_cnn_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(6)
    y = rng.integers(0, 2, size=120)
    X = rng.normal(size=(120, 78))
    X[:, 0] += y * 4.0
    params, _ = train(X, y, TrainConfig(seed=1, epochs=1))
    path = tmp_path / "cnn.json"
    save_model(params, "cnn", path)
    _, loaded = load_classifier(path)
    probe = rng.normal(size=(100, 78))
    assert np.array_equal(predict_proba(params, probe),
                          loaded.predict_proba(probe))


def test_truncated_model_file(tmp_path):
    rng = np.random.default_rng(7)
    y = rng.integers(0, 2, size=60)
    X = rng.normal(size=(60, 78))
    X[:, 0] += y * 4.0
    params, _ = train(X, y, TrainConfig(seed=1, epochs=1))
    path = tmp_path / "cnn.json"
    save_model(params, "cnn", path)
    data = path.read_bytes()
    path.write_bytes(data[:len(data) // 2])
    with pytest.raises(CorruptModel):
        load_classifier(path)


def test_catalog_version_mismatch(tmp_path):
    model = GaussianNBModel().fit(
        np.array([[0.0], [1.0], [0.1], [0.9]]), np.array([0, 1, 0, 1]))
    path = tmp_path / "nb.json"
    save_model(model, "nb", path, catalog_version="v1")
    with pytest.raises(SchemaMismatch):
        load_model(path, catalog_version="v2")


def test_tuning_ranges():
    from pastewatch.ml.tuning import sample_trial
    import random
    rng = random.Random(0)
    for _ in range(100):
        cfg = sample_trial(rng)
        assert 10 <= cfg["batch_size"] <= 256
        assert 16 <= cfg["deconv_units"] <= 256
        assert 0.0 <= cfg["dropout_rate"] <= 0.5
        assert 5 <= cfg["dense_units"] <= 256


def test_tuning_single_trial_returned():
    best, log = tune_hyperparameters(None, None, trials=1, seed=0,
                                     objective=lambda cfg: 1.0)
    assert len(log) == 1
    assert best == log[0]


def test_tuning_finds_dummy_optimum():
    best, log = tune_hyperparameters(
        None, None, trials=400, seed=1,
        objective=lambda cfg: abs(cfg["batch_size"] - 20))
    assert abs(best.batch_size - 20) <= 2


def test_fit_model_dispatch():
    rng = np.random.default_rng(9)
    y = rng.integers(0, 2, size=100)
    X = rng.normal(size=(100, 78))
    X[:, 0] += y * 6.0
    clf, history = fit_model("cnn", X, y, config=TrainConfig(seed=0,
                                                             epochs=1))
    assert history and len(history) == 1
    p = clf.predict_proba(X)
    assert p.shape == (100,)
    clf2, _ = fit_model("nb", X, y)
    assert clf2.predict_proba(X).shape == (100,)

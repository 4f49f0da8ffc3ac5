"""From-scratch 1D CNN classifier.

Pipeline: batch-norm -> zero-pad -> conv(kernel 3, stride 3) -> ReLU ->
transposed conv -> ReLU -> max-pool(2) -> inverted dropout -> dense ->
ReLU -> dense(1) -> sigmoid. All passes are plain numpy; training is
seeded minibatch SGD and fully deterministic.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import DegenerateDataset, ShapeError

EPS_BN = 1e-5
EPS_LOSS = 1e-7
BN_MOMENTUM = 0.9


@dataclass(frozen=True)
class CnnSpec:
    input_dim: int = 78
    pad_to: int = 96
    conv_kernel: int = 3
    conv_stride: int = 3
    deconv_kernel: int = 25
    deconv_stride: int = 7
    deconv_units: int = 242
    pool_window: int = 2
    dropout_rate: float = 0.215
    dense_units: int = 190

    @property
    def conv_units(self) -> int:
        return (self.pad_to - self.conv_kernel) // self.conv_stride + 1

    @property
    def deconv_full(self) -> int:
        return (self.conv_units - 1) * self.deconv_stride + self.deconv_kernel

    @property
    def pool_units(self) -> int:
        return self.deconv_units // self.pool_window

    def __post_init__(self):
        if self.pad_to < self.input_dim:
            raise ValueError("pad_to must be >= input_dim")
        if self.deconv_full < self.deconv_units:
            raise ValueError("deconv kernel/stride cannot produce "
                             f"{self.deconv_units} units")

    def shape_chain(self):
        return (self.input_dim, self.pad_to, self.conv_units,
                self.deconv_units, self.pool_units, self.dense_units, 1)

    def hash(self) -> str:
        return hashlib.sha256(
            json.dumps(asdict(self), sort_keys=True).encode()).hexdigest()[:16]


def spec_for(deconv_units: int = 242, dropout_rate: float = 0.215,
             dense_units: int = 190, **kw) -> CnnSpec:
    """Spec with an arbitrary transposed-conv size. The canonical 242 is
    realized as kernel 25 / stride 7; other sizes use stride 1 with the
    smallest fitting kernel and crop the surplus."""
    base = CnnSpec(**kw)
    if deconv_units == base.deconv_full:
        kernel, stride = base.deconv_kernel, base.deconv_stride
    else:
        stride = 1
        kernel = max(1, deconv_units - (base.conv_units - 1))
    return CnnSpec(input_dim=base.input_dim, pad_to=base.pad_to,
                   conv_kernel=base.conv_kernel, conv_stride=base.conv_stride,
                   deconv_kernel=kernel, deconv_stride=stride,
                   deconv_units=deconv_units, pool_window=base.pool_window,
                   dropout_rate=dropout_rate, dense_units=dense_units)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 3
    batch_size: int = 20
    learning_rate: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")


@dataclass
class ModelParams:
    spec: CnnSpec
    arrays: dict  # name -> np.ndarray
    catalog_version: str = "v1"

    @property
    def spec_hash(self) -> str:
        return self.spec.hash()


@dataclass(frozen=True)
class PredictionOutcome:
    probability: float
    decision: int

    @classmethod
    def from_probability(cls, p: float, threshold: float = 0.5):
        return cls(probability=float(p), decision=int(p >= threshold))


def _xavier(rng, fan_in, fan_out, shape):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def init_params(spec: CnnSpec, seed: int, catalog_version="v1") -> ModelParams:
    rng = np.random.default_rng(seed)
    d = spec.input_dim
    arrays = {
        "bn_gamma": np.ones(d), "bn_beta": np.zeros(d),
        "bn_mean": np.zeros(d), "bn_var": np.ones(d),
        "conv_w": _xavier(rng, spec.conv_kernel, 1, (spec.conv_kernel,)),
        "conv_b": np.full(1, 0.01),
        "deconv_w": _xavier(rng, 1, spec.deconv_kernel,
                            (spec.deconv_kernel,)),
        "deconv_b": np.full(1, 0.01),
        "dense1_w": _xavier(rng, spec.pool_units, spec.dense_units,
                            (spec.pool_units, spec.dense_units)),
        "dense1_b": np.full(spec.dense_units, 0.01),
        "dense2_w": _xavier(rng, spec.dense_units, 1, (spec.dense_units, 1)),
        "dense2_b": np.zeros(1),
    }
    return ModelParams(spec=spec, arrays=arrays,
                       catalog_version=catalog_version)


TRAINABLE = ("bn_gamma", "bn_beta", "conv_w", "conv_b", "deconv_w",
             "deconv_b", "dense1_w", "dense1_b", "dense2_w", "dense2_b")


def _sigmoid(z):
    return np.where(z >= 0, 1.0 / (1.0 + np.exp(-z)),
                    np.exp(z) / (1.0 + np.exp(z)))


def forward(params: ModelParams, x, mode: str = "infer",
            dropout_mask=None, rng=None):
    """Run the network. x is (78,) or (n, 78). Returns (probabilities,
    cache of layer activations). Train mode uses batch statistics and
    dropout; infer mode uses running statistics and no dropout."""
    spec = params.spec
    a = params.arrays
    X = np.atleast_2d(np.asarray(x, dtype=float))
    if X.shape[1] != spec.input_dim:
        raise ShapeError(f"expected input of length {spec.input_dim}, "
                         f"got {X.shape[1]}")
    n = X.shape[0]
    cache = {"x": X, "mode": mode}

    if mode == "train":
        mu = X.mean(axis=0)
        var = X.var(axis=0)
    else:
        mu, var = a["bn_mean"], a["bn_var"]
    inv_std = 1.0 / np.sqrt(var + EPS_BN)
    xhat = (X - mu) * inv_std
    bn = a["bn_gamma"] * xhat + a["bn_beta"]
    cache.update(mu=mu, var=var, inv_std=inv_std, xhat=xhat)

    padded = np.zeros((n, spec.pad_to))
    padded[:, :spec.input_dim] = bn
    cache["padded"] = padded

    cu, ck, cs = spec.conv_units, spec.conv_kernel, spec.conv_stride
    z_conv = np.full((n, cu), a["conv_b"][0])
    for t in range(ck):
        z_conv += padded[:, t:t + cs * (cu - 1) + 1:cs] * a["conv_w"][t]
    a_conv = np.maximum(z_conv, 0.0)
    cache.update(z_conv=z_conv, a_conv=a_conv)

    dk, ds = spec.deconv_kernel, spec.deconv_stride
    full = spec.deconv_full
    z_full = np.full((n, full), a["deconv_b"][0])
    for t in range(dk):
        z_full[:, t:t + ds * (cu - 1) + 1:ds] += a_conv * a["deconv_w"][t]
    z_dec = z_full[:, :spec.deconv_units]
    a_dec = np.maximum(z_dec, 0.0)
    cache.update(z_dec=z_dec, a_dec=a_dec)

    pu, pw = spec.pool_units, spec.pool_window
    windows = a_dec[:, :pu * pw].reshape(n, pu, pw)
    pool_idx = windows.argmax(axis=2)
    pooled = np.take_along_axis(windows, pool_idx[:, :, None],
                                axis=2)[:, :, 0]
    cache.update(pool_idx=pool_idx, pooled=pooled)

    if mode == "train":
        if dropout_mask is None:
            keep = 1.0 - spec.dropout_rate
            if rng is None:
                rng = np.random.default_rng(0)
            dropout_mask = (rng.random((n, pu)) < keep) / max(keep, EPS_LOSS)
        dropped = pooled * dropout_mask
    else:
        dropout_mask = np.ones((n, pu))
        dropped = pooled
    cache.update(dropout_mask=dropout_mask, dropped=dropped)

    z1 = dropped @ a["dense1_w"] + a["dense1_b"]
    a1 = np.maximum(z1, 0.0)
    z2 = a1 @ a["dense2_w"] + a["dense2_b"]
    prob = _sigmoid(z2[:, 0])
    cache.update(z1=z1, a1=a1, z2=z2, prob=prob)
    return prob, cache


def loss(probability, label) -> float:
    """Binary cross-entropy with probability clamped to [eps, 1-eps]."""
    p = np.clip(np.asarray(probability, dtype=float), EPS_LOSS, 1 - EPS_LOSS)
    y = np.asarray(label, dtype=float)
    return float(np.mean(-(y * np.log(p) + (1 - y) * np.log(1 - p))))


def gradients(params: ModelParams, X, y, dropout_mask=None):
    """Analytic gradients of the mean BCE loss over a batch with respect
    to every trainable array. The dropout mask may be fixed so results
    can be compared against finite differences."""
    spec = params.spec
    a = params.arrays
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).reshape(-1)
    n = X.shape[0]
    prob, c = forward(params, X, mode="train", dropout_mask=dropout_mask)
    p = np.clip(prob, EPS_LOSS, 1 - EPS_LOSS)
    grads = {}

    dz2 = ((p - y) / n)[:, None]
    grads["dense2_w"] = c["a1"].T @ dz2
    grads["dense2_b"] = dz2.sum(axis=0)
    da1 = dz2 @ a["dense2_w"].T
    dz1 = da1 * (c["z1"] > 0)
    grads["dense1_w"] = c["dropped"].T @ dz1
    grads["dense1_b"] = dz1.sum(axis=0)
    ddropped = dz1 @ a["dense1_w"].T
    dpooled = ddropped * c["dropout_mask"]

    pu, pw = spec.pool_units, spec.pool_window
    dwindows = np.zeros((n, pu, pw))
    np.put_along_axis(dwindows, c["pool_idx"][:, :, None],
                      dpooled[:, :, None], axis=2)
    da_dec = np.zeros_like(c["a_dec"])
    da_dec[:, :pu * pw] = dwindows.reshape(n, pu * pw)
    dz_dec = da_dec * (c["z_dec"] > 0)

    cu = spec.conv_units
    dk, ds = spec.deconv_kernel, spec.deconv_stride
    dz_full = np.zeros((n, spec.deconv_full))
    dz_full[:, :spec.deconv_units] = dz_dec
    dw_d = np.zeros(dk)
    da_conv = np.zeros_like(c["a_conv"])
    for t in range(dk):
        sl = dz_full[:, t:t + ds * (cu - 1) + 1:ds]
        dw_d[t] = float((sl * c["a_conv"]).sum())
        da_conv += sl * a["deconv_w"][t]
    grads["deconv_w"] = dw_d
    grads["deconv_b"] = np.array([dz_full.sum()])

    dz_conv = da_conv * (c["z_conv"] > 0)
    ck, cs = spec.conv_kernel, spec.conv_stride
    dw_c = np.zeros(ck)
    dpadded = np.zeros_like(c["padded"])
    for t in range(ck):
        sl = c["padded"][:, t:t + cs * (cu - 1) + 1:cs]
        dw_c[t] = float((sl * dz_conv).sum())
        dpadded[:, t:t + cs * (cu - 1) + 1:cs] += dz_conv * a["conv_w"][t]
    grads["conv_w"] = dw_c
    grads["conv_b"] = np.array([dz_conv.sum()])

    dbn = dpadded[:, :spec.input_dim]
    grads["bn_gamma"] = (dbn * c["xhat"]).sum(axis=0)
    grads["bn_beta"] = dbn.sum(axis=0)
    dxhat = dbn * a["bn_gamma"]
    inv_std = c["inv_std"]
    grads_x = (inv_std / n) * (n * dxhat - dxhat.sum(axis=0)
                               - c["xhat"] * (dxhat * c["xhat"]).sum(axis=0))
    grads["_input"] = grads_x  # not trainable; useful for testing
    return grads, loss(prob, y)


def train(X, y, config: TrainConfig, spec: CnnSpec | None = None,
          catalog_version: str = "v1"):
    """Minibatch SGD. Returns (params, per-epoch mean loss history)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if X.shape[0] == 0 or len(np.unique(y)) < 2:
        raise DegenerateDataset("training data must contain both classes")
    spec = spec or CnnSpec()
    params = init_params(spec, config.seed, catalog_version)
    rng = np.random.default_rng(config.seed + 1)
    a = params.arrays
    n = X.shape[0]
    history = []
    for _ in range(config.epochs):
        order = rng.permutation(n)
        epoch_losses = []
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            bx, by = X[idx], y[idx]
            grads, batch_loss = _train_step(params, bx, by, rng)
            for name in TRAINABLE:
                a[name] = a[name] - config.learning_rate * grads[name]
            epoch_losses.append(batch_loss)
        history.append(float(np.mean(epoch_losses)))
    return params, history


def _train_step(params, bx, by, rng):
    spec = params.spec
    a = params.arrays
    keep = 1.0 - spec.dropout_rate
    mask = (rng.random((bx.shape[0], spec.pool_units)) < keep) / keep
    grads, batch_loss = gradients(params, bx, by, dropout_mask=mask)
    # update running batch-norm statistics
    mu = bx.mean(axis=0)
    var = bx.var(axis=0)
    a["bn_mean"] = BN_MOMENTUM * a["bn_mean"] + (1 - BN_MOMENTUM) * mu
    a["bn_var"] = BN_MOMENTUM * a["bn_var"] + (1 - BN_MOMENTUM) * var
    return grads, batch_loss


def predict_proba(params: ModelParams, X):
    prob, _ = forward(params, X, mode="infer")
    return prob


def predict(params: ModelParams, x, threshold: float = 0.5
            ) -> PredictionOutcome:
    prob, _ = forward(params, np.atleast_2d(x), mode="infer")
    return PredictionOutcome.from_probability(prob[0], threshold)

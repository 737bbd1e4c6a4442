"""Single-hidden-layer regression network with logistic units.

Training is plain mini-batch gradient descent on the standardized inputs and
response for a fixed number of epochs (no early stopping). All randomness
(weight init, per-epoch shuffles) comes from one counter-based generator
keyed by the seed, so a fit is a pure function of (data, config). The batch
loop itself runs in the compiled kernel when available.
"""

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import ConfigError, DataError, NumericalError

_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 30
    hidden_units: int = 3
    learning_rate: float = 0.05
    batch_size: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.hidden_units < 1 or self.batch_size < 1:
            raise ConfigError("epochs, hidden_units, and batch_size must be >= 1")
        if not self.learning_rate > 0.0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")


@dataclass(frozen=True)
class NeuralNet:
    w_hidden: np.ndarray  # h x p
    b_hidden: np.ndarray  # h
    w_out: np.ndarray  # h
    b_out: float
    x_mean: np.ndarray
    x_scale: np.ndarray
    y_mean: float
    y_scale: float
    seed: int
    final_train_mse: float


@dataclass(frozen=True)
class NetGradient:
    w_hidden: np.ndarray
    b_hidden: np.ndarray
    w_out: np.ndarray
    b_out: float


def _standardize_stats(arr, axis=0):
    mean = arr.mean(axis=axis)
    scale = arr.std(axis=axis)
    # Constant columns carry no signal; a unit scale just passes the centered
    # zeros through instead of dividing by zero.
    scale = np.where(scale == 0.0, 1.0, scale)
    return mean, scale


def nn_fit(x, y, config: TrainConfig = TrainConfig()) -> NeuralNet:
    """Train for exactly config.epochs passes; returns the final parameters."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    n, p = x.shape
    if n != y.shape[0]:
        raise DataError(f"x has {n} rows but y has {y.shape[0]}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DataError("inputs contain non-finite values")
    if n < config.batch_size:
        raise DataError(f"need at least batch_size={config.batch_size} rows, got {n}")

    x_mean, x_scale = _standardize_stats(x)
    y_mean = float(y.mean())
    y_scale = float(y.std())
    if y_scale == 0.0:
        y_scale = 1.0
    xs = np.ascontiguousarray((x - x_mean) / x_scale)
    ys = np.ascontiguousarray((y - y_mean) / y_scale)

    h = config.hidden_units
    rng = np.random.Generator(np.random.Philox(key=np.array([config.seed & _UINT64_MASK, 0], dtype=np.uint64)))
    w_hidden = rng.uniform(-1.0, 1.0, size=(h, p)) / np.sqrt(p)
    b_hidden = np.zeros(h)
    w_out = rng.uniform(-1.0, 1.0, size=h) / np.sqrt(h)
    b_out = np.zeros(1)
    orders = np.ascontiguousarray(
        np.stack([rng.permutation(n) for _ in range(config.epochs)]).astype(np.int64)
    )

    losses = _kernels.train_mlp(
        xs, ys, w_hidden, b_hidden, w_out, b_out,
        orders, config.batch_size, config.learning_rate,
    )
    bad = np.flatnonzero(~np.isfinite(np.asarray(losses)))
    if bad.size:
        raise NumericalError(f"training loss became non-finite at epoch {int(bad[0])}")

    hidden = 1.0 / (1.0 + np.exp(-(xs @ w_hidden.T + b_hidden)))
    fitted = y_scale * (hidden @ w_out + b_out[0]) + y_mean
    return NeuralNet(
        w_hidden=w_hidden,
        b_hidden=b_hidden,
        w_out=w_out,
        b_out=float(b_out[0]),
        x_mean=x_mean,
        x_scale=x_scale,
        y_mean=y_mean,
        y_scale=y_scale,
        seed=int(config.seed),
        final_train_mse=float(np.mean((fitted - y) ** 2)),
    )


def _forward(net: NeuralNet, x):
    xs = (x - net.x_mean) / net.x_scale
    hidden = 1.0 / (1.0 + np.exp(-(xs @ net.w_hidden.T + net.b_hidden)))
    out_std = hidden @ net.w_out + net.b_out
    return xs, hidden, out_std


def nn_predict(net: NeuralNet, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[1] != net.w_hidden.shape[1]:
        raise DataError(f"expected {net.w_hidden.shape[1]} columns, got {x.shape[1]}")
    _, _, out_std = _forward(net, x)
    return net.y_scale * out_std + net.y_mean


def nn_loss(net: NeuralNet, x, y) -> float:
    """Mean squared error of raw-space predictions; the quantity nn_gradient differentiates."""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    return float(np.mean((nn_predict(net, x) - y) ** 2))


def nn_gradient(net: NeuralNet, x_batch, y_batch) -> NetGradient:
    """Exact gradient of nn_loss with respect to every network parameter."""
    x = np.asarray(x_batch, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    y = np.asarray(y_batch, dtype=np.float64).reshape(-1)
    if x.shape[0] == 0:
        raise DataError("batch is empty")
    if x.shape[0] != y.shape[0]:
        raise DataError(f"x has {x.shape[0]} rows but y has {y.shape[0]}")
    if x.shape[1] != net.w_hidden.shape[1]:
        raise DataError(f"expected {net.w_hidden.shape[1]} columns, got {x.shape[1]}")

    xs, hidden, out_std = _forward(net, x)
    pred = net.y_scale * out_std + net.y_mean
    g_out = 2.0 * net.y_scale * (pred - y) / len(y)
    d_hidden = np.outer(g_out, net.w_out) * hidden * (1.0 - hidden)
    return NetGradient(
        w_hidden=d_hidden.T @ xs,
        b_hidden=d_hidden.sum(axis=0),
        w_out=hidden.T @ g_out,
        b_out=float(g_out.sum()),
    )

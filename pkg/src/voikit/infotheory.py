"""Sample-based Gaussian information estimates.

Mutual information between a predictor block z and a scalar response x is
estimated from covariance log-determinants:

    I(X, Z) = [ln det K_z + ln det K_x - ln det K_joint] / 2

All three determinants come from sub-blocks of one joint covariance estimate,
so the block-determinant (Fischer) inequality keeps the estimate nonnegative
before the final round-off clamp. High-dimensional or short samples are
handled by shrinking the joint covariance toward the scaled identity before
factorization. For non-Gaussian data the quantity is read as a lower bound on
the true mutual information.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg.lapack import dpotrf

from .errors import ConfigError, DataError, NumericalError
from .frontier import LN_2PI, EntropyNats

LN_2 = math.log(2.0)


@dataclass(frozen=True)
class CovMatrix:
    """Symmetric covariance estimate with its sample count."""

    dim: int
    entries: np.ndarray
    n_samples: int

    def __post_init__(self):
        e = self.entries
        if e.shape != (self.dim, self.dim):
            raise DataError(f"covariance shape {e.shape} does not match dim {self.dim}")
        if not np.isfinite(e).all():
            raise DataError("covariance has non-finite entries")
        scale = max(1.0, float(np.abs(e).max()))
        if np.abs(e - e.T).max() > 1e-12 * scale:
            raise DataError("covariance is not symmetric")
        if np.diag(e).min() < -1e-12 * scale:
            raise DataError("covariance has a negative diagonal entry")


@dataclass(frozen=True)
class MIEstimate:
    nats: float
    bits: float
    shrinkage: float
    dims: tuple[int, int]


@dataclass(frozen=True)
class AcfSeries:
    lags: np.ndarray
    values: np.ndarray


def nats_to_bits(nats: float) -> float:
    return float(nats) / LN_2


def sample_covariance(data) -> CovMatrix:
    """Column-centered covariance with 1/(N-1) normalization."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DataError(f"expected an N x d matrix, got ndim={arr.ndim}")
    n = arr.shape[0]
    if n < 2:
        raise DataError(f"need at least 2 samples, got {n}")
    if not np.isfinite(arr).all():
        raise DataError("data contains non-finite entries")
    centered = arr - arr.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    cov = (cov + cov.T) / 2.0
    return CovMatrix(dim=cov.shape[0], entries=cov, n_samples=n)


def _shrink(entries: np.ndarray, shrinkage: float) -> np.ndarray:
    if not 0.0 <= shrinkage < 1.0:
        raise ConfigError(f"shrinkage must be in [0, 1), got {shrinkage}")
    if shrinkage == 0.0:
        return entries
    target = float(np.diag(entries).mean())
    out = (1.0 - shrinkage) * entries
    out[np.diag_indices_from(out)] += shrinkage * target
    return out


def _chol_logdet(entries: np.ndarray) -> float:
    # Sum of log Cholesky pivots; dpotrf reports the index of the first
    # non-positive pivot, which is far more useful than a bare failure.
    factor, info = dpotrf(entries, lower=1)
    if info != 0:
        raise NumericalError(
            f"covariance is not positive definite (pivot {info} of {entries.shape[0]})"
        )
    return 2.0 * float(np.log(np.diag(factor)).sum())


def logdet_psd(k: CovMatrix, shrinkage: float = 0.0) -> float:
    """ln det of (1-s)*K + s*mean(diag K)*Identity via Cholesky pivots."""
    return _chol_logdet(_shrink(k.entries, shrinkage))


def gaussian_mi(z, x, shrinkage: float = 0.01) -> MIEstimate:
    """Gaussian mutual-information estimate between predictors z and response x.

    z is N x p (a vector is treated as one column); x must be a single column.
    One joint covariance of [z | x] is estimated, shrunk by `shrinkage` toward
    its scaled identity, and the three log-determinants are taken from its
    sub-blocks. Result is clamped to 0 after a -1e-9 round-off allowance.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 1:
        z = z[:, None]
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 2 and x.shape[1] == 1:
        x = x[:, 0]
    if x.ndim != 1:
        raise DataError("response must be a single column")
    if z.shape[0] != x.shape[0]:
        raise DataError(f"z has {z.shape[0]} rows but x has {x.shape[0]}")
    n, p = z.shape
    if np.var(x) == 0.0:
        raise DataError("response has zero variance")
    if n < p + 2:
        warnings.warn(
            f"only {n} samples for {p} predictors; the MI estimate will lean on shrinkage",
            RuntimeWarning,
            stacklevel=2,
        )

    joint = sample_covariance(np.column_stack([z, x]))
    shrunk = _shrink(joint.entries, shrinkage)
    logdet_joint = _chol_logdet(shrunk)
    logdet_z = _chol_logdet(shrunk[:p, :p])
    logdet_x = float(np.log(shrunk[p, p]))

    raw = 0.5 * (logdet_z + logdet_x - logdet_joint)
    if raw < -1e-9:
        raise NumericalError(f"MI estimate {raw} fell below the round-off floor")
    nats = max(0.0, raw)
    return MIEstimate(nats=nats, bits=nats_to_bits(nats), shrinkage=float(shrinkage), dims=(p, 1))


def gaussian_entropy_from_sample(x) -> EntropyNats:
    """Plug the sample variance (1/(N-1)) into the Gaussian entropy formula."""
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.size < 2:
        raise DataError(f"need at least 2 samples, got {arr.size}")
    if not np.isfinite(arr).all():
        raise DataError("data contains non-finite entries")
    var = float(arr.var(ddof=1))
    if var == 0.0:
        raise DataError("sample has zero variance")
    return EntropyNats(0.5 * (LN_2PI + math.log(var) + 1.0))


def acf(series, max_lag: int) -> AcfSeries:
    """Sample autocorrelation at lags 0..max_lag, biased (1/N) normalization.

    The full-sample mean is used at every lag, which keeps |acf| <= 1 and the
    implied autocovariance sequence positive semidefinite.
    """
    arr = np.asarray(series, dtype=np.float64).reshape(-1)
    if max_lag < 1:
        raise ConfigError(f"max_lag must be >= 1, got {max_lag}")
    if arr.size <= max_lag + 1:
        raise DataError(f"series of length {arr.size} is too short for max_lag {max_lag}")
    if not np.isfinite(arr).all():
        raise DataError("series contains non-finite values")
    centered = arr - arr.mean()
    c0 = float(centered @ centered)
    if c0 == 0.0:
        raise DataError("series has zero variance")
    values = np.empty(max_lag + 1, dtype=np.float64)
    values[0] = 1.0
    for lag in range(1, max_lag + 1):
        values[lag] = float(centered[:-lag] @ centered[lag:]) / c0
    return AcfSeries(lags=np.arange(max_lag + 1), values=values)

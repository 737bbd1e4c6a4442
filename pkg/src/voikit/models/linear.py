"""Ordinary least squares with an intercept."""

from dataclasses import dataclass

import numpy as np

from ..errors import DataError


@dataclass(frozen=True)
class LinearModel:
    intercept: float
    coefficients: np.ndarray
    rank_deficient: bool = False


def ols_fit(x, y) -> LinearModel:
    """Least-squares affine fit via SVD (numpy lstsq).

    Rank-deficient designs get the minimum-norm coefficient vector and are
    flagged rather than rejected; centering first keeps the intercept out of
    the norm being minimized, so a constant-only design reduces to
    intercept = mean(y).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if x.shape[0] != y.shape[0]:
        raise DataError(f"x has {x.shape[0]} rows but y has {y.shape[0]}")
    if x.shape[0] < 2:
        raise DataError("need at least 2 rows")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DataError("inputs contain non-finite values")

    x_mean = x.mean(axis=0)
    y_mean = float(y.mean())
    coef, _, rank, _ = np.linalg.lstsq(x - x_mean, y - y_mean, rcond=None)
    return LinearModel(
        intercept=y_mean - float(x_mean @ coef),
        coefficients=coef,
        rank_deficient=bool(rank < x.shape[1]),
    )

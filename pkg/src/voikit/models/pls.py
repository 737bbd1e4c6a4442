"""Partial least squares for a scalar response, SIMPLS construction.

Each component takes its weight vector from the current cross-product of the
centered design with the response, scores the design, normalizes, and then
deflates the cross-product by projecting out the orthonormalized loading
basis. For a scalar response the cross-product is a single vector, so no
inner SVD is needed. With as many components as the design rank the
regression vector coincides with least squares.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DataError, NumericalError


@dataclass(frozen=True)
class PlsModel:
    n_components: int
    x_mean: np.ndarray
    y_mean: float
    weight_matrix: np.ndarray  # p x c; scores = (x - x_mean) @ weight_matrix
    regression_vector: np.ndarray
    intercept: float


def simpls_fit(x, y, n_components: int = 3) -> PlsModel:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    n, p = x.shape
    if n != y.shape[0]:
        raise DataError(f"x has {n} rows but y has {y.shape[0]}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DataError("inputs contain non-finite values")
    if not 1 <= n_components <= min(p, n - 1):
        raise ConfigError(
            f"n_components must be in [1, min(p={p}, N-1={n - 1})], got {n_components}"
        )
    if np.var(y) == 0.0:
        raise DataError("response has zero variance")

    x_mean = x.mean(axis=0)
    y_mean = float(y.mean())
    xc = x - x_mean
    yc = y - y_mean

    cross = xc.T @ yc
    weights = np.empty((p, n_components), dtype=np.float64)
    y_loadings = np.empty(n_components, dtype=np.float64)
    loading_basis = np.empty((p, n_components), dtype=np.float64)
    for comp in range(n_components):
        weight = cross.copy()
        score = xc @ weight
        norm = float(np.linalg.norm(score))
        if norm <= 1e-12 * max(1.0, float(np.abs(xc).max())):
            raise NumericalError(
                f"component {comp + 1}: design is exhausted, reduce n_components"
            )
        score /= norm
        weight /= norm
        loading = xc.T @ score
        y_loadings[comp] = float(yc @ score)

        basis_vec = loading
        if comp > 0:
            prior = loading_basis[:, :comp]
            # two Gram-Schmidt passes keep the basis orthonormal to machine
            # precision, which the full-rank = least-squares property needs
            basis_vec = loading - prior @ (prior.T @ loading)
            basis_vec = basis_vec - prior @ (prior.T @ basis_vec)
        basis_norm = float(np.linalg.norm(basis_vec))
        if basis_norm == 0.0:
            raise NumericalError(f"component {comp + 1}: degenerate loading basis")
        basis_vec = basis_vec / basis_norm

        cross = cross - basis_vec * float(basis_vec @ cross)
        weights[:, comp] = weight
        loading_basis[:, comp] = basis_vec

    regression = weights @ y_loadings
    return PlsModel(
        n_components=int(n_components),
        x_mean=x_mean,
        y_mean=y_mean,
        weight_matrix=weights,
        regression_vector=regression,
        intercept=y_mean - float(x_mean @ regression),
    )

"""Sampling-based value estimate for partition (Hartley) information.

Partitioning a sample into k cells and predicting each cell by its mean
achieves expected quadratic utility  -(mean within-cell squared deviation)/2
at information level ln(k) nats. Minimizing the within-cell variance over
partitions is exactly the k-means objective, so the estimator runs Lloyd
iterations from several seeded initializations and keeps the best. The result
is a lower bound on the true partition value (Lloyd is a local optimizer).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigError, DataError

LLOYD_MAX_ITER = 300
LLOYD_REL_TOL = 1e-10

_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class HartleyEstimate:
    k: int
    info_nats: float
    u_value: float
    restarts: int
    seed: int


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    # Counter-based generator keyed by (seed, restart): reproducible across
    # platforms and trivially parallelizable over restarts.
    key = np.array([seed & _UINT64_MASK, restart], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def hartley_value_estimate(samples, k, restarts=4, seed=0) -> HartleyEstimate:
    """Best-of-restarts k-means value of a k-cell partition of `samples`.

    Returns u_value = -(mean squared distance to assigned cell mean)/2 and
    info_nats = ln k. Restarts are compared by (objective, restart index), so
    the outcome does not depend on evaluation order.
    """
    data = np.asarray(samples, dtype=np.float64)
    if data.ndim == 1:
        data = data[:, None]
    if data.ndim != 2 or data.shape[0] == 0:
        raise DataError("samples must be a nonempty 1-D or 2-D array")
    if not np.isfinite(data).all():
        raise DataError("samples contain non-finite values")
    n = data.shape[0]
    if not 1 <= k <= n:
        raise ConfigError(f"k must satisfy 1 <= k <= {n}, got {k}")
    if restarts < 1:
        raise ConfigError(f"restarts must be >= 1, got {restarts}")

    data = np.ascontiguousarray(data)
    best_obj = math.inf
    for restart in range(restarts):
        rng = _restart_rng(seed, restart)
        idx = rng.choice(n, size=k, replace=False)
        centroids = np.ascontiguousarray(data[idx])
        _, objective, _ = _kernels.lloyd(data, centroids, LLOYD_MAX_ITER, LLOYD_REL_TOL)
        if objective < best_obj:
            best_obj = objective

    return HartleyEstimate(
        k=int(k),
        info_nats=math.log(k),
        u_value=-0.5 * best_obj,
        restarts=int(restarts),
        seed=int(seed),
    )

"""Closed-form information/performance frontier for the mean-square objective.

For the quadratic utility u(x, y) = -(x - y)^2 / 2 the constrained-information
optimum admits closed forms parameterized by an inverse temperature beta > 0:

    log_partition(beta) = ln sqrt(2*pi / beta)
    utility(beta)       = -1 / (2*beta)
    info(beta)          = H - [ln(2*pi) + 1 - ln(beta)] / 2

where H is the differential entropy (nats) of the variable being estimated.
Eliminating beta gives the explicit frontier

    U(I)    = -exp(2*(H - I) - 1) / (4*pi)
    V(I)    = U(I) - U(0)
    RMSE(I) = exp(H - I) / sqrt(2*pi*e)     (= sigma * exp(-I) for Gaussian H)

U is strictly increasing and concave in I, with U'(I) = 1/beta; the module
exposes finite-difference diagnostics for both properties.

All information quantities here are in nats.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

LN_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class EntropyNats:
    """Differential entropy in nats. Finite, may be negative."""

    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ConfigError(f"entropy must be finite, got {self.value!r}")

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class FrontierPoint:
    info_nats: float
    u_value: float
    v_value: float
    rmse: float


@dataclass(frozen=True)
class FrontierCurve:
    """Sampled frontier. `sigma` is set when the curve came from a Gaussian scale."""

    entropy: EntropyNats
    points: tuple[FrontierPoint, ...]
    sigma: float | None = None


def _as_entropy(h) -> float:
    value = float(h)
    if not math.isfinite(value):
        raise ConfigError(f"entropy must be finite, got {h!r}")
    return value


def _require_beta(beta) -> float:
    b = float(beta)
    if not math.isfinite(b) or b <= 0.0:
        raise ConfigError(f"inverse temperature must be > 0, got {beta!r}")
    return b


def _require_sigma(sigma) -> float:
    s = float(sigma)
    if not math.isfinite(s) or s <= 0.0:
        raise ConfigError(f"sigma must be > 0, got {sigma!r}")
    return s


def _require_info(info_nats) -> float:
    i = float(info_nats)
    if not math.isfinite(i) or i < 0.0:
        raise ConfigError(f"information must be >= 0 nats, got {info_nats!r}")
    return i


def quadratic_log_partition(beta) -> float:
    """ln sqrt(2*pi / beta), the quadratic-utility log partition term."""
    return 0.5 * (LN_2PI - math.log(_require_beta(beta)))


def utility_at_beta(beta) -> float:
    """Maximum expected utility at inverse temperature beta: -1/(2*beta)."""
    return -0.5 / _require_beta(beta)


def info_at_beta(beta, h) -> float:
    """Information level paired with beta: H - [ln(2*pi) + 1 - ln(beta)] / 2.

    May be negative for small beta; only I >= 0 is on the feasible frontier,
    so callers clamp to that branch.
    """
    return _as_entropy(h) - 0.5 * (LN_2PI + 1.0 - math.log(_require_beta(beta)))


def beta_of_info(info_nats, h):
    """Inverse temperature on the frontier at information I: 2*pi*e^(2*(I-H)+1)."""
    i = _require_info(info_nats)
    return 2.0 * math.pi * math.exp(2.0 * (i - _as_entropy(h)) + 1.0)


def utility_at_info(info_nats, h) -> float:
    """Frontier utility U(I) = -exp(2*(H - I) - 1) / (4*pi).

    Equals -sigma^2 * exp(-2*I) / 2 when H is the Gaussian entropy of sigma.
    """
    i = _require_info(info_nats)
    return -math.exp(2.0 * (_as_entropy(h) - i) - 1.0) / (4.0 * math.pi)


def value_of_information(info_nats, h) -> float:
    """V(I) = U(I) - U(0): the utility gained by I nats over the prior optimum."""
    if float(info_nats) == 0.0:
        return 0.0
    return utility_at_info(info_nats, h) - utility_at_info(0.0, h)


def gaussian_entropy(sigma) -> EntropyNats:
    """Differential entropy of a Gaussian with standard deviation sigma."""
    s = _require_sigma(sigma)
    return EntropyNats(0.5 * (LN_2PI + 2.0 * math.log(s) + 1.0))


def rmse_frontier_entropy(h, info_nats) -> float:
    """Smallest achievable RMSE at I nats for entropy H: exp(H - I)/sqrt(2*pi*e)."""
    i = _require_info(info_nats)
    return math.exp(_as_entropy(h) - i - 0.5 * (LN_2PI + 1.0))


def rmse_frontier_gaussian(sigma, info_nats) -> float:
    """Gaussian-response RMSE frontier: sigma * exp(-I)."""
    return _require_sigma(sigma) * math.exp(-_require_info(info_nats))


def info_required_for_rmse(sigma, target_rmse) -> float:
    """Minimum nats needed to reach `target_rmse`: ln(sigma / target_rmse).

    Targets above sigma (already achievable with zero information) and
    non-positive targets (unreachable at finite information) are rejected.
    """
    s = _require_sigma(sigma)
    t = float(target_rmse)
    if not math.isfinite(t) or t <= 0.0:
        raise ConfigError(f"target RMSE must be > 0, got {target_rmse!r}")
    if t > s:
        raise ConfigError(f"target RMSE {t} exceeds sigma {s}; no information is needed")
    return math.log(s / t)


def frontier_curve(info_grid, sigma=None, entropy=None) -> FrontierCurve:
    """Sample the frontier on an increasing grid of information values (nats).

    Exactly one of `sigma` and `entropy` selects the source. Each point carries
    (I, U, V, RMSE), mutually consistent: rmse = sqrt(-2*U), V = U - U(0).
    """
    if (sigma is None) == (entropy is None):
        raise ConfigError("provide exactly one of sigma= or entropy=")
    if sigma is not None:
        h = gaussian_entropy(sigma)
        sigma = float(sigma)
    else:
        h = entropy if isinstance(entropy, EntropyNats) else EntropyNats(_as_entropy(entropy))

    grid = [float(i) for i in info_grid]
    if not grid:
        raise ConfigError("information grid is empty")
    if any(not math.isfinite(i) or i < 0.0 for i in grid):
        raise ConfigError("information grid values must be finite and >= 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("information grid must be strictly increasing")

    points = tuple(
        FrontierPoint(
            info_nats=i,
            u_value=utility_at_info(i, h),
            v_value=value_of_information(i, h),
            rmse=rmse_frontier_entropy(h, i),
        )
        for i in grid
    )
    return FrontierCurve(entropy=h, points=points, sigma=sigma)


def duality_gap(h, info_grid, fd_step=1e-5) -> np.ndarray:
    """Relative error |dU/dI - 1/beta| / (1/beta) at each grid point.

    dU/dI is a centered finite difference of utility_at_info with step
    `fd_step`; on the frontier it should equal 1/beta_of_info(I, H).
    """
    hv = _as_entropy(h)
    gaps = []
    for i in info_grid:
        i = _require_info(i)
        step = min(fd_step, i) if i > 0 else fd_step
        du = (utility_at_info(i + step, hv) - utility_at_info(max(i - step, 0.0), hv)) / (
            (i + step) - max(i - step, 0.0)
        )
        inv_beta = 1.0 / beta_of_info(i, hv)
        gaps.append(abs(du - inv_beta) / inv_beta)
    return np.asarray(gaps)


def concavity_second_differences(h, info_grid) -> np.ndarray:
    """Second differences of U(I) over the grid; all must be <= 0 up to round-off."""
    grid = np.asarray([_require_info(i) for i in info_grid], dtype=np.float64)
    if grid.size < 3:
        raise ConfigError("need at least 3 grid points for second differences")
    u = np.asarray([utility_at_info(i, h) for i in grid])
    slopes = np.diff(u) / np.diff(grid)
    return np.diff(slopes)

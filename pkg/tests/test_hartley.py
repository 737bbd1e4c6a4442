"""Partition-value estimator against quadrature oracles.

The independent oracle for the k=2 Gaussian case: the optimal 2-cell
quantizer of N(0, 1) splits at 0 and reconstructs each half at its
conditional mean, so the distortion is computed here by direct quadrature
rather than through the estimator under test.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from voikit.errors import ConfigError, DataError
from voikit.frontier import utility_at_info
from voikit.hartley import hartley_value_estimate
from voikit.infotheory import gaussian_entropy_from_sample


def _phi(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def two_cell_gaussian_distortion() -> float:
    """Quadrature oracle: E[(x - E[x | x > 0])^2] for a standard Gaussian."""
    level = quad(lambda x: x * _phi(x), 0.0, np.inf)[0] / 0.5  # E[x | x > 0]
    upper = quad(lambda x: (x - level) ** 2 * _phi(x), 0.0, np.inf)[0]
    return 2.0 * upper


@pytest.fixture(scope="module")
def unit_sample():
    rng = np.random.Generator(np.random.Philox(key=np.array([99, 1 << 62], dtype=np.uint64)))
    return rng.normal(size=100_000)


class TestOracle:
    def test_quadrature_matches_closed_form(self):
        # Sanity-check the oracle itself: distortion = 1 - 2/pi.
        assert two_cell_gaussian_distortion() == pytest.approx(1.0 - 2.0 / math.pi, rel=1e-10)


class TestHartleyEstimate:
    def test_single_cell_is_sample_variance(self):
        rng = np.random.default_rng(4)
        sample = rng.normal(2.0, 3.0, size=500)
        est = hartley_value_estimate(sample, 1, restarts=1, seed=0)
        assert est.u_value == pytest.approx(-0.5 * sample.var(), rel=1e-12)
        assert est.info_nats == 0.0

    def test_two_cells_match_quadrature_oracle(self, unit_sample):
        oracle_u = -0.5 * two_cell_gaussian_distortion()
        est = hartley_value_estimate(unit_sample, 2, restarts=4, seed=7)
        assert est.u_value == pytest.approx(oracle_u, abs=5e-3)
        assert est.info_nats == pytest.approx(math.log(2.0))

    def test_never_beats_shannon_value(self, unit_sample):
        h = gaussian_entropy_from_sample(unit_sample)
        n = unit_sample.size
        for k in (2, 4, 8):
            est = hartley_value_estimate(unit_sample, k, restarts=4, seed=11)
            # 3 standard errors of the mean of the per-point half squared distances
            deviations = 0.5 * (unit_sample - unit_sample.mean()) ** 2
            tol = 3.0 * deviations.std() / math.sqrt(n)
            assert est.u_value <= utility_at_info(est.info_nats, h) + tol

    def test_nondecreasing_in_k(self, unit_sample):
        sample = unit_sample[:20_000]
        values = [
            hartley_value_estimate(sample, k, restarts=4, seed=5).u_value
            for k in (1, 2, 3, 4, 6, 8)
        ]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_deterministic(self, unit_sample):
        sample = unit_sample[:5_000]
        a = hartley_value_estimate(sample, 3, restarts=3, seed=123)
        b = hartley_value_estimate(sample, 3, restarts=3, seed=123)
        assert a == b

    def test_more_restarts_never_hurt(self):
        rng = np.random.default_rng(8)
        sample = np.concatenate([rng.normal(-4, 0.3, 300), rng.normal(4, 0.3, 300)])
        few = hartley_value_estimate(sample, 4, restarts=1, seed=2)
        many = hartley_value_estimate(sample, 4, restarts=8, seed=2)
        assert many.u_value >= few.u_value

    def test_multivariate_samples(self):
        rng = np.random.default_rng(6)
        sample = rng.normal(size=(2_000, 3))
        est = hartley_value_estimate(sample, 2, restarts=2, seed=0)
        assert est.u_value < 0.0

    def test_errors(self):
        with pytest.raises(DataError):
            hartley_value_estimate([], 1)
        with pytest.raises(ConfigError):
            hartley_value_estimate([1.0, 2.0], 3)
        with pytest.raises(ConfigError):
            hartley_value_estimate([1.0, 2.0], 1, restarts=0)
        with pytest.raises(ConfigError):
            hartley_value_estimate([1.0, 2.0], 0)

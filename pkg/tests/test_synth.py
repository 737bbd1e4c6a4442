"""Synthetic panel generators and their closed-form information targets."""

import math

import numpy as np
import pytest

from voikit.data import align_panel, lag_embed, load_prices
from voikit.errors import ConfigError
from voikit.infotheory import acf, gaussian_mi
from voikit.synth import (
    SynthSpec,
    generate,
    population_mi_nats,
    prices_to_csv_text,
    spec_to_config,
)


class TestSpec:
    def test_validation(self):
        with pytest.raises(ConfigError):
            SynthSpec(kind="brownian")
        with pytest.raises(ConfigError):
            SynthSpec(kind="ar1_panel", phi=1.0)
        with pytest.raises(ConfigError):
            SynthSpec(kind="gaussian_channel", rho=-1.0)
        with pytest.raises(ConfigError):
            SynthSpec(kind="ar1_panel", length=1)

    def test_population_mi(self):
        assert population_mi_nats(
            SynthSpec(kind="gaussian_channel", rho=0.6)
        ) == pytest.approx(0.22314355131420976, rel=1e-12)
        assert population_mi_nats(
            SynthSpec(kind="ar1_panel", phi=0.5)
        ) == pytest.approx(-0.5 * math.log(0.75), rel=1e-12)


class TestAr1Panel:
    def test_shape_and_positivity(self):
        series = generate(SynthSpec(kind="ar1_panel", length=701, n_symbols=5, seed=1))
        assert len(series) == 5
        for s in series:
            assert len(s.close) == 701
            assert np.all(s.close > 0)
            assert np.all(np.isfinite(s.close))

    def test_round_trips_through_csv(self, tmp_path):
        spec = SynthSpec(kind="ar1_panel", length=50, n_symbols=2, seed=3)
        path = tmp_path / "panel.csv"
        path.write_text(prices_to_csv_text(generate(spec), spec_to_config(spec)))
        series = load_prices(str(path))
        assert sorted(s.symbol for s in series) == ["BTC/USD", "ETH/USD"]
        assert all(len(s.close) == 50 for s in series)

    def test_byte_identical_for_fixed_seed(self):
        spec = SynthSpec(kind="ar1_panel", length=80, n_symbols=3, seed=9)
        a = prices_to_csv_text(generate(spec), spec_to_config(spec))
        b = prices_to_csv_text(generate(spec), spec_to_config(spec))
        assert a == b

    def test_seed_changes_output(self):
        a = prices_to_csv_text(generate(SynthSpec(kind="ar1_panel", length=80, seed=1)))
        b = prices_to_csv_text(generate(SynthSpec(kind="ar1_panel", length=80, seed=2)))
        assert a != b

    def test_autocorrelation_matches_phi(self):
        spec = SynthSpec(kind="ar1_panel", length=60_000, n_symbols=1, phi=0.5, seed=4)
        series = generate(spec)
        returns = np.diff(np.log(series[0].close))
        estimated = acf(returns, 3)
        for lag in (1, 2, 3):
            assert estimated.values[lag] == pytest.approx(0.5**lag, abs=0.02)


class TestGaussianChannel:
    def test_mi_recovers_closed_form(self):
        spec = SynthSpec(
            kind="gaussian_channel", length=30_001, rho=0.6, noise_scale=0.02, seed=5
        )
        series = generate(spec)
        panel = align_panel(series, ["TGT", "SIG"])
        dataset = lag_embed(panel, "TGT", 2)
        est = gaussian_mi(dataset.predictors, dataset.response, shrinkage=0.0)
        assert est.nats == pytest.approx(population_mi_nats(spec), rel=0.05)

    def test_two_symbols(self):
        series = generate(SynthSpec(kind="gaussian_channel", length=100, seed=6))
        assert sorted(s.symbol for s in series) == ["SIG", "TGT"]

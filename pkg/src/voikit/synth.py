"""Seeded synthetic price panels in the `date,symbol,close` format.

Two generators:

* ar1_panel: independent AR(1) log-return series per symbol, integrated into
  positive price paths s(t) = s(0) * exp(sum of returns). The population MI
  between the target's next return and any lag window of the panel is
  -ln(1 - phi^2)/2, carried only by the target's own first lag.
* gaussian_channel: a two-symbol panel where the target's next return is
  correlated (rho) with the signal symbol's current return, so the population
  MI against any predictor window containing that lag is -ln(1 - rho^2)/2.

Both are pure functions of their spec (Philox keyed by the seed).
"""

import json
import math
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from .data import PriceSeries
from .errors import ConfigError

DEFAULT_SYMBOLS = ("BTC/USD", "ETH/USD", "DAI/BTC", "XRP/BTC", "IOT/BTC")
_START_DATE = date(2000, 1, 3)
_START_PRICE = 100.0
_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SynthSpec:
    kind: str  # "gaussian_channel" | "ar1_panel"
    length: int = 701
    n_symbols: int = 5
    rho: float = 0.6
    phi: float = 0.5
    noise_scale: float = 0.03
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("gaussian_channel", "ar1_panel"):
            raise ConfigError(f"unknown synthetic kind {self.kind!r}")
        if self.length < 2:
            raise ConfigError(f"length must be >= 2, got {self.length}")
        if not -1.0 < self.rho < 1.0:
            raise ConfigError(f"rho must be in (-1, 1), got {self.rho}")
        if not -1.0 < self.phi < 1.0:
            raise ConfigError(f"phi must be in (-1, 1), got {self.phi}")
        if not self.noise_scale > 0.0:
            raise ConfigError(f"noise_scale must be > 0, got {self.noise_scale}")
        if self.n_symbols < 1:
            raise ConfigError(f"n_symbols must be >= 1, got {self.n_symbols}")


def population_mi_nats(spec: SynthSpec) -> float:
    """Closed-form MI between the target's next return and its best predictor lag."""
    coeff = spec.rho if spec.kind == "gaussian_channel" else spec.phi
    return -0.5 * math.log(1.0 - coeff * coeff)


def _rng(spec: SynthSpec) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=np.array([spec.seed & _UINT64_MASK, 0], dtype=np.uint64))
    )


def _to_prices(symbol: str, returns: np.ndarray) -> PriceSeries:
    log_price = math.log(_START_PRICE) + np.concatenate([[0.0], np.cumsum(returns)])
    days = tuple(_START_DATE + timedelta(days=i) for i in range(len(log_price)))
    return PriceSeries(symbol=symbol, dates=days, close=np.exp(log_price))


def generate(spec: SynthSpec) -> list[PriceSeries]:
    if spec.kind == "ar1_panel":
        return _ar1_panel(spec)
    return _gaussian_channel(spec)


def _ar1_panel(spec: SynthSpec) -> list[PriceSeries]:
    rng = _rng(spec)
    n_returns = spec.length - 1
    phi = spec.phi
    stationary = spec.noise_scale / math.sqrt(1.0 - phi * phi)
    series = []
    for j in range(spec.n_symbols):
        symbol = DEFAULT_SYMBOLS[j] if j < len(DEFAULT_SYMBOLS) else f"SYM{j}"
        returns = np.empty(n_returns)
        level = rng.normal(0.0, stationary)
        shocks = rng.normal(0.0, spec.noise_scale, size=n_returns)
        for t in range(n_returns):
            level = phi * level + shocks[t]
            returns[t] = level
        series.append(_to_prices(symbol, returns))
    return series


def _gaussian_channel(spec: SynthSpec) -> list[PriceSeries]:
    rng = _rng(spec)
    n_returns = spec.length - 1
    rho = spec.rho
    signal = rng.normal(0.0, spec.noise_scale, size=n_returns)
    shocks = rng.normal(0.0, spec.noise_scale, size=n_returns)
    target = np.empty(n_returns)
    target[0] = rng.normal(0.0, spec.noise_scale)
    # target return at t is rho-correlated with the signal return at t-1
    target[1:] = rho * signal[:-1] + math.sqrt(1.0 - rho * rho) * shocks[1:]
    return [_to_prices("TGT", target), _to_prices("SIG", signal)]


def spec_to_config(spec: SynthSpec) -> dict:
    return {
        "command": "synth",
        "kind": spec.kind,
        "length": spec.length,
        "n_symbols": spec.n_symbols,
        "rho": spec.rho,
        "phi": spec.phi,
        "noise_scale": spec.noise_scale,
        "seed": spec.seed,
    }


def prices_to_csv_text(series, config: dict | None = None) -> str:
    """The `load_prices` CSV format; byte-stable for a fixed input.

    The optional config echo rides in a leading '#' comment line, which
    load_prices skips.
    """
    lines = []
    if config is not None:
        lines.append("# config: " + json.dumps(config, sort_keys=True))
    lines.append("date,symbol,close")
    for s in series:
        for day, close in zip(s.dates, s.close):
            lines.append(f"{day.isoformat()},{s.symbol},{float(close)!r}")
    return "\n".join(lines) + "\n"

"""Price ingestion, log-returns, lag embedding, and rolling splits.

The input CSV format is `date,symbol,close` with ISO-8601 dates, one row per
(date, symbol). Returns are aligned across symbols by intersecting the
per-symbol return dates; missing dates are dropped, never imputed.
"""

import csv
import math
from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import DataError

CSV_HEADER = ("date", "symbol", "close")


@dataclass(frozen=True)
class PriceSeries:
    symbol: str
    dates: tuple[date, ...]
    close: np.ndarray

    def __post_init__(self):
        if len(self.dates) != len(self.close):
            raise DataError(f"{self.symbol}: {len(self.dates)} dates vs {len(self.close)} closes")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise DataError(f"{self.symbol}: dates are not strictly increasing")
        closes = np.asarray(self.close, dtype=np.float64)
        if closes.size and (not np.isfinite(closes).all() or closes.min() <= 0.0):
            raise DataError(f"{self.symbol}: prices must be finite and positive")


@dataclass(frozen=True)
class ReturnsPanel:
    symbols: tuple[str, ...]
    dates: tuple[date, ...]
    returns: np.ndarray  # T x m, column j aligned to symbols[j]

    @property
    def n_rows(self) -> int:
        return self.returns.shape[0]


@dataclass(frozen=True)
class LagDataset:
    """Lag-embedded design matrix with no-lookahead alignment metadata.

    Row i predicts the target return dated row_dates[i] from returns on
    strictly earlier dates; predictor columns run symbol-major, most recent
    lag first, so the column count is len(symbols) * n_lags.
    """

    predictors: np.ndarray
    response: np.ndarray
    symbols: tuple[str, ...]
    n_lags: int
    target_symbol: str
    row_dates: tuple[date, ...]
    latest_predictor_dates: tuple[date, ...]

    @property
    def m(self) -> int:
        return len(self.symbols)

    @property
    def n_rows(self) -> int:
        return self.predictors.shape[0]


@dataclass(frozen=True)
class RollingSplit:
    train_rows: range
    test_rows: range


def load_prices(csv_path) -> list[PriceSeries]:
    """Parse a `date,symbol,close` CSV into one PriceSeries per symbol.

    Rows may arrive in any order; output series are date-sorted and the list
    is ordered by symbol name. Malformed rows, non-positive prices, and
    duplicate (date, symbol) keys are rejected with their line number.
    """
    per_symbol: dict[str, dict[date, float]] = {}
    try:
        handle = open(csv_path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {csv_path}: {exc}") from exc
    with handle:
        # '#' lines carry config echoes from the synthetic generator; skip
        # them while keeping real line numbers for error reporting.
        numbered = (
            (lineno, line)
            for lineno, line in enumerate(handle, start=1)
            if not line.startswith("#")
        )
        try:
            header_line_no, header_line = next(numbered)
        except StopIteration:
            raise DataError(f"{csv_path}: empty file") from None
        header = next(csv.reader([header_line]))
        if tuple(col.strip() for col in header) != CSV_HEADER:
            raise DataError(
                f"{csv_path} line {header_line_no}: expected header {','.join(CSV_HEADER)}"
            )
        for lineno, line in numbered:
            row = next(csv.reader([line]), None)
            if not row:
                continue
            if len(row) != 3:
                raise DataError(f"{csv_path} line {lineno}: expected 3 fields, got {len(row)}")
            raw_date, symbol, raw_close = (field.strip() for field in row)
            try:
                day = date.fromisoformat(raw_date)
            except ValueError:
                raise DataError(f"{csv_path} line {lineno}: bad date {raw_date!r}") from None
            try:
                close = float(raw_close)
            except ValueError:
                raise DataError(f"{csv_path} line {lineno}: bad close {raw_close!r}") from None
            if not math.isfinite(close) or close <= 0.0:
                raise DataError(f"{csv_path} line {lineno}: close must be positive, got {close}")
            if not symbol:
                raise DataError(f"{csv_path} line {lineno}: empty symbol")
            by_date = per_symbol.setdefault(symbol, {})
            if day in by_date:
                raise DataError(f"{csv_path} line {lineno}: duplicate ({raw_date}, {symbol})")
            by_date[day] = close
    if not per_symbol:
        raise DataError(f"{csv_path}: no data rows")
    series = []
    for symbol in sorted(per_symbol):
        days = sorted(per_symbol[symbol])
        closes = np.array([per_symbol[symbol][d] for d in days], dtype=np.float64)
        series.append(PriceSeries(symbol=symbol, dates=tuple(days), close=closes))
    return series


def log_returns(prices: PriceSeries) -> tuple[tuple[date, ...], np.ndarray]:
    """ln(close[i+1]/close[i]) dated by the later day."""
    if len(prices.close) < 2:
        raise DataError(f"{prices.symbol}: need at least 2 prices for returns")
    returns = np.diff(np.log(prices.close))
    return prices.dates[1:], returns


def align_panel(series, symbols) -> ReturnsPanel:
    """Per-symbol log-returns restricted to the dates all requested symbols share.

    Column order follows the requested `symbols` order.
    """
    by_name = {s.symbol: s for s in series}
    symbols = tuple(symbols)
    if len(set(symbols)) != len(symbols):
        raise DataError("requested symbols contain duplicates")
    missing = [s for s in symbols if s not in by_name]
    if missing:
        raise DataError(f"unknown symbols: {', '.join(missing)}")
    if not symbols:
        raise DataError("no symbols requested")

    per_symbol = {}
    common: set[date] | None = None
    for name in symbols:
        dates, rets = log_returns(by_name[name])
        per_symbol[name] = dict(zip(dates, rets))
        common = set(dates) if common is None else common & set(dates)
    if not common:
        raise DataError("requested symbols share no return dates")
    ordered = tuple(sorted(common))
    matrix = np.empty((len(ordered), len(symbols)), dtype=np.float64)
    for j, name in enumerate(symbols):
        column = per_symbol[name]
        matrix[:, j] = [column[d] for d in ordered]
    return ReturnsPanel(symbols=symbols, dates=ordered, returns=matrix)


def lag_embed(panel: ReturnsPanel, target_symbol: str, n_lags: int) -> LagDataset:
    """Build the design matrix of the n most recent returns of every symbol.

    Response row i is the target's return at panel row t = n_lags + i; its
    predictors are returns at rows t-1 .. t-n_lags (most recent first) for
    each symbol in panel order.
    """
    if target_symbol not in panel.symbols:
        raise DataError(f"target symbol {target_symbol!r} not in panel")
    if n_lags < 1:
        raise DataError(f"n_lags must be >= 1, got {n_lags}")
    t_total = panel.n_rows
    if t_total < n_lags + 1:
        raise DataError(f"panel of {t_total} rows is too short for {n_lags} lags")
    target_col = panel.symbols.index(target_symbol)
    n_rows = t_total - n_lags
    m = len(panel.symbols)

    predictors = np.empty((n_rows, m * n_lags), dtype=np.float64)
    for j in range(m):
        for lag in range(1, n_lags + 1):
            predictors[:, j * n_lags + (lag - 1)] = panel.returns[
                n_lags - lag : t_total - lag, j
            ]
    response = panel.returns[n_lags:, target_col].copy()
    return LagDataset(
        predictors=predictors,
        response=response,
        symbols=panel.symbols,
        n_lags=n_lags,
        target_symbol=target_symbol,
        row_dates=panel.dates[n_lags:],
        latest_predictor_dates=panel.dates[n_lags - 1 : t_total - 1],
    )


def rolling_splits(n_rows: int, train_len: int = 100, test_len: int = 25, step: int = 25):
    """Forward-rolling train/test windows: offsets 0, step, 2*step, ... while they fit."""
    if min(train_len, test_len, step) < 1:
        raise DataError("train_len, test_len, and step must all be >= 1")
    if n_rows < train_len + test_len:
        raise DataError(
            f"{n_rows} rows cannot fit train {train_len} + test {test_len}"
        )
    splits = []
    for offset in range(0, n_rows - (train_len + test_len) + 1, step):
        splits.append(
            RollingSplit(
                train_rows=range(offset, offset + train_len),
                test_rows=range(offset + train_len, offset + train_len + test_len),
            )
        )
    return splits

"""Rolling-window sweep over (symbols, lags, model) with frontier joins.

Every (m, n, model) cell trains and scores on each rolling split, estimates
the train/test mutual information of the same rows, and averages across
splits. Overlay rows then place each cell against the theoretical RMSE
frontier evaluated at the cell's average training MI.

Per-split model seeds derive from the master seed by hashing the cell
coordinates, so the report is a pure function of (data, config, master seed)
and is independent of evaluation order.
"""

import hashlib
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .data import LagDataset, ReturnsPanel, RollingSplit, lag_embed, rolling_splits
from .errors import ConfigError, DataError
from .frontier import rmse_frontier_gaussian
from .infotheory import gaussian_mi, nats_to_bits
from .models import TrainConfig, nn_fit, ols_fit, predict, simpls_fit

MODEL_KINDS = ("lm", "pls", "nn")


@dataclass(frozen=True)
class WindowConfig:
    train_len: int = 100
    test_len: int = 25
    step: int = 25


@dataclass(frozen=True)
class SplitMetrics:
    rmse_train: float | None
    rmse_test: float | None
    corr_test: float | None
    mrr_test: float | None
    mi_train_nats: float | None
    mi_test_nats: float | None
    sigma_train: float
    sigma_test: float
    mean_abs_test: float
    degenerate: bool = False


@dataclass(frozen=True)
class CellAverages:
    rmse_train: float | None
    rmse_test: float | None
    corr_test: float | None
    mrr_test: float | None
    mi_train_nats: float | None
    mi_test_nats: float | None
    sigma_train_pooled: float
    sigma_test_pooled: float
    n_splits: int
    n_corr_defined: int
    n_degenerate: int


@dataclass(frozen=True)
class SweepCell:
    m: int
    n: int
    model_kind: str
    splits: tuple[SplitMetrics, ...]
    averages: CellAverages


@dataclass(frozen=True)
class BacktestReport:
    config: dict
    cells: tuple[SweepCell, ...]
    overlay: tuple[dict, ...]


def mrr(predicted, actual) -> float:
    """exp(mean of sign(pred) * sign(actual) * |actual|) - 1, with sign(0) = 0."""
    predicted = np.asarray(predicted, dtype=np.float64).reshape(-1)
    actual = np.asarray(actual, dtype=np.float64).reshape(-1)
    if predicted.size == 0 or predicted.size != actual.size:
        raise DataError("predicted and actual must be equal-length and nonempty")
    traded = np.sign(predicted) * np.sign(actual) * np.abs(actual)
    return float(math.expm1(traded.mean()))


def correlation(predicted, actual) -> float | None:
    """Pearson correlation; None when either side has zero variance."""
    predicted = np.asarray(predicted, dtype=np.float64).reshape(-1)
    actual = np.asarray(actual, dtype=np.float64).reshape(-1)
    if predicted.size != actual.size:
        raise DataError("predicted and actual must be equal length")
    if predicted.size < 2:
        raise DataError("need at least 2 points for a correlation")
    sp = predicted.std()
    sa = actual.std()
    if sp == 0.0 or sa == 0.0:
        return None
    cov = float(((predicted - predicted.mean()) * (actual - actual.mean())).mean())
    return cov / (sp * sa)


def _rmse(errors) -> float:
    return float(np.sqrt(np.mean(np.square(errors))))


def _fit(model_kind, x, y, train_config: TrainConfig, pls_components: int):
    if model_kind == "lm":
        return ols_fit(x, y)
    if model_kind == "pls":
        cap = min(pls_components, x.shape[1], x.shape[0] - 1)
        return simpls_fit(x, y, n_components=cap)
    if model_kind == "nn":
        return nn_fit(x, y, train_config)
    raise ConfigError(f"unknown model kind {model_kind!r}; expected one of {MODEL_KINDS}")


def evaluate_split(
    dataset: LagDataset,
    split: RollingSplit,
    model_kind: str,
    train_config: TrainConfig = TrainConfig(),
    shrinkage: float = 0.01,
    pls_components: int = 3,
) -> SplitMetrics:
    """Fit on the train rows only and score both sides of the split.

    A constant response on either side flags the split degenerate; nothing is
    fabricated for the unavailable metrics.
    """
    if split.train_rows.stop > dataset.n_rows or split.test_rows.stop > dataset.n_rows:
        raise DataError("split exceeds dataset bounds")
    tr = slice(split.train_rows.start, split.train_rows.stop)
    te = slice(split.test_rows.start, split.test_rows.stop)
    x_tr, y_tr = dataset.predictors[tr], dataset.response[tr]
    x_te, y_te = dataset.predictors[te], dataset.response[te]

    sigma_train = float(y_tr.std(ddof=1))
    sigma_test = float(y_te.std(ddof=1))
    mean_abs_test = float(np.abs(y_te).mean())
    if sigma_train == 0.0 or sigma_test == 0.0:
        return SplitMetrics(
            rmse_train=None, rmse_test=None, corr_test=None, mrr_test=None,
            mi_train_nats=None, mi_test_nats=None,
            sigma_train=sigma_train, sigma_test=sigma_test,
            mean_abs_test=mean_abs_test, degenerate=True,
        )

    model = _fit(model_kind, x_tr, y_tr, train_config, pls_components)
    pred_tr = predict(model, x_tr)
    pred_te = predict(model, x_te)
    with warnings.catch_warnings():
        # Undersampled cells (p close to or beyond the window length) are an
        # expected part of the sweep; shrinkage keeps them finite.
        warnings.simplefilter("ignore", RuntimeWarning)
        mi_train = gaussian_mi(x_tr, y_tr, shrinkage).nats
        mi_test = gaussian_mi(x_te, y_te, shrinkage).nats
    return SplitMetrics(
        rmse_train=_rmse(pred_tr - y_tr),
        rmse_test=_rmse(pred_te - y_te),
        corr_test=correlation(pred_te, y_te),
        mrr_test=mrr(pred_te, y_te),
        mi_train_nats=mi_train,
        mi_test_nats=mi_test,
        sigma_train=sigma_train,
        sigma_test=sigma_test,
        mean_abs_test=mean_abs_test,
    )


def derive_seed(master_seed: int, m: int, n: int, model_kind: str, split_index: int) -> int:
    """Stable per-(cell, split) seed: master XOR hash of the coordinates."""
    tag = f"{m}:{n}:{model_kind}:{split_index}".encode()
    digest = hashlib.blake2b(tag, digest_size=8).digest()
    return (master_seed ^ int.from_bytes(digest, "big")) & ((1 << 64) - 1)


def _mean_or_none(values) -> float | None:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def _pooled_sigma(sigmas) -> float:
    return float(np.sqrt(np.mean(np.square(sigmas))))


def _cell_averages(splits) -> CellAverages:
    return CellAverages(
        rmse_train=_mean_or_none(s.rmse_train for s in splits),
        rmse_test=_mean_or_none(s.rmse_test for s in splits),
        corr_test=_mean_or_none(s.corr_test for s in splits),
        mrr_test=_mean_or_none(s.mrr_test for s in splits),
        mi_train_nats=_mean_or_none(s.mi_train_nats for s in splits),
        mi_test_nats=_mean_or_none(s.mi_test_nats for s in splits),
        sigma_train_pooled=_pooled_sigma([s.sigma_train for s in splits]),
        sigma_test_pooled=_pooled_sigma([s.sigma_test for s in splits]),
        n_splits=len(splits),
        n_corr_defined=sum(s.corr_test is not None for s in splits),
        n_degenerate=sum(s.degenerate for s in splits),
    )


def run_sweep(
    panel: ReturnsPanel,
    target: str,
    m_range=range(1, 6),
    n_range=range(2, 21),
    models=MODEL_KINDS,
    train_config: TrainConfig = TrainConfig(),
    window_config: WindowConfig = WindowConfig(),
    shrinkage: float = 0.01,
    master_seed: int = 0,
    pls_components: int = 3,
) -> BacktestReport:
    """Evaluate every (m, n, model) cell over its rolling splits and average."""
    models = tuple(models)
    unknown = [k for k in models if k not in MODEL_KINDS]
    if unknown:
        raise ConfigError(f"unknown model kinds: {unknown}")
    m_values = sorted(set(int(m) for m in m_range))
    n_values = sorted(set(int(n) for n in n_range))
    if not m_values or not n_values or not models:
        raise ConfigError("m_range, n_range, and models must all be nonempty")
    if m_values[0] < 1 or m_values[-1] > len(panel.symbols):
        raise ConfigError(
            f"m_range must lie in [1, {len(panel.symbols)}], got {m_values}"
        )

    cells = []
    for model_kind in models:
        for m in m_values:
            sub_symbols = panel.symbols[:m]
            if target not in sub_symbols:
                raise ConfigError(
                    f"target {target!r} is not among the first {m} symbols {sub_symbols}; "
                    "put the target first in the symbol order"
                )
            sub_panel = ReturnsPanel(
                symbols=sub_symbols,
                dates=panel.dates,
                returns=panel.returns[:, :m],
            )
            for n in n_values:
                try:
                    dataset = lag_embed(sub_panel, target, n)
                    splits = rolling_splits(
                        dataset.n_rows,
                        train_len=window_config.train_len,
                        test_len=window_config.test_len,
                        step=window_config.step,
                    )
                except DataError as exc:
                    raise DataError(f"cell (m={m}, n={n}): {exc}") from exc
                metrics = []
                for split_index, split in enumerate(splits):
                    cfg = train_config
                    if model_kind == "nn":
                        cfg = replace(
                            train_config,
                            seed=derive_seed(master_seed, m, n, model_kind, split_index),
                        )
                    metrics.append(
                        evaluate_split(
                            dataset, split, model_kind,
                            train_config=cfg, shrinkage=shrinkage,
                            pls_components=pls_components,
                        )
                    )
                metrics = tuple(metrics)
                cells.append(
                    SweepCell(
                        m=m, n=n, model_kind=model_kind,
                        splits=metrics, averages=_cell_averages(metrics),
                    )
                )
    cells = tuple(cells)
    config_echo = {
        "target": target,
        "symbols": list(panel.symbols),
        "m_range": m_values,
        "n_range": n_values,
        "models": list(models),
        "train_len": window_config.train_len,
        "test_len": window_config.test_len,
        "step": window_config.step,
        "epochs": train_config.epochs,
        "hidden_units": train_config.hidden_units,
        "learning_rate": train_config.learning_rate,
        "batch_size": train_config.batch_size,
        "pls_components": pls_components,
        "shrinkage": shrinkage,
        "master_seed": master_seed,
    }
    report = BacktestReport(config=config_echo, cells=cells, overlay=())
    return replace(report, overlay=tuple(frontier_overlay(report)))


def frontier_overlay(report: BacktestReport) -> list[dict]:
    """One row per cell joining averaged metrics with the theoretical frontier.

    Frontier columns evaluate the Gaussian RMSE frontier at the cell's average
    training MI, against the pooled train and test response sigmas.
    """
    rows = []
    for cell in sorted(report.cells, key=lambda c: (c.model_kind, c.m, c.n)):
        avg = cell.averages
        mi = avg.mi_train_nats
        rows.append(
            {
                "m": cell.m,
                "n": cell.n,
                "model": cell.model_kind,
                "mi_nats": mi,
                "mi_bits": None if mi is None else nats_to_bits(mi),
                "avg_rmse_test": avg.rmse_test,
                "frontier_rmse_train_sigma": None
                if mi is None
                else rmse_frontier_gaussian(avg.sigma_train_pooled, mi),
                "frontier_rmse_test_sigma": None
                if mi is None
                else rmse_frontier_gaussian(avg.sigma_test_pooled, mi),
                "avg_corr": avg.corr_test,
                "avg_mrr": avg.mrr_test,
            }
        )
    return rows


def _split_to_dict(s: SplitMetrics) -> dict:
    return {
        "rmse_train": s.rmse_train,
        "rmse_test": s.rmse_test,
        "corr_test": s.corr_test,
        "mrr_test": s.mrr_test,
        "mi_train_nats": s.mi_train_nats,
        "mi_test_nats": s.mi_test_nats,
        "sigma_train": s.sigma_train,
        "sigma_test": s.sigma_test,
        "mean_abs_test": s.mean_abs_test,
        "degenerate": s.degenerate,
    }


def report_to_dict(report: BacktestReport) -> dict:
    """JSON-ready view of the full report, deterministically ordered."""
    return {
        "config": report.config,
        "cells": [
            {
                "m": cell.m,
                "n": cell.n,
                "model": cell.model_kind,
                "averages": {
                    "rmse_train": cell.averages.rmse_train,
                    "rmse_test": cell.averages.rmse_test,
                    "corr_test": cell.averages.corr_test,
                    "mrr_test": cell.averages.mrr_test,
                    "mi_train_nats": cell.averages.mi_train_nats,
                    "mi_test_nats": cell.averages.mi_test_nats,
                    "sigma_train_pooled": cell.averages.sigma_train_pooled,
                    "sigma_test_pooled": cell.averages.sigma_test_pooled,
                    "n_splits": cell.averages.n_splits,
                    "n_corr_defined": cell.averages.n_corr_defined,
                    "n_degenerate": cell.averages.n_degenerate,
                },
                "splits": [_split_to_dict(s) for s in cell.splits],
            }
            for cell in report.cells
        ],
        "overlay": list(report.overlay),
    }

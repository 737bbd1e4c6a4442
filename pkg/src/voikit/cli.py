"""Command-line entry point.

Subcommands: frontier, mi, acf, backtest, hartley, synth. Every output file
embeds the exact configuration that produced it, so a rerun with the same
inputs and seed reproduces it byte for byte. Files are written to a temp name
and atomically renamed; failures never leave partial outputs behind.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure.
"""

import argparse
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .backtest import WindowConfig, report_to_dict, run_sweep
from .data import align_panel, lag_embed, load_prices, log_returns, rolling_splits
from .errors import ConfigError, DataError, NumericalError
from .frontier import (
    EntropyNats,
    frontier_curve,
    gaussian_entropy,
    utility_at_info,
)
from .hartley import hartley_value_estimate
from .infotheory import acf as compute_acf
from .infotheory import gaussian_entropy_from_sample, gaussian_mi, nats_to_bits
from .models import TrainConfig
from .synth import SynthSpec, generate, prices_to_csv_text, spec_to_config

OUT_DIR_ENV = "VOIKIT_OUT_DIR"

_UINT64_MASK = (1 << 64) - 1


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".voikit-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _config_line(config: dict) -> str:
    return "# config: " + json.dumps(config, sort_keys=True) + "\n"


def _csv_text(config: dict, header, rows) -> str:
    buf = io.StringIO()
    buf.write(_config_line(config))
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_format_cell(v) for v in row) + "\n")
    return buf.getvalue()


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))  # plain repr even for numpy scalars
    return str(value)


def _parse_int_range(text: str) -> list[int]:
    """'2' -> [2]; '1:5' -> [1, 2, 3, 4, 5]."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
    except ValueError:
        pass
    raise ConfigError(f"expected an integer or lo:hi range, got {text!r}")


def _parse_grid(text: str) -> list[float]:
    """'start:stop:step' inclusive grid in nats."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"grid must be numeric, got {text!r}") from None
    if step <= 0 or stop < start or start < 0:
        raise ConfigError(f"grid must satisfy 0 <= start <= stop with step > 0, got {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def cmd_frontier(args) -> int:
    if (args.sigma is None) == (args.entropy is None):
        raise ConfigError("provide exactly one of --sigma or --entropy")
    grid = _parse_grid(args.grid)
    if args.sigma is not None:
        curve = frontier_curve(grid, sigma=args.sigma)
    else:
        curve = frontier_curve(grid, entropy=EntropyNats(args.entropy))
    config = {
        "command": "frontier",
        "sigma": args.sigma,
        "entropy": None if args.entropy is None else float(curve.entropy),
        "grid": args.grid,
        "units": args.units,
    }
    scale = 1.0 if args.units == "nats" else 1.0 / math.log(2.0)
    rows = [
        (p.info_nats * scale, p.u_value, p.v_value, p.rmse)
        for p in curve.points
    ]
    _atomic_write(args.out, _csv_text(config, ("info", "u", "v", "rmse"), rows))
    print(f"wrote {len(rows)} frontier rows to {args.out}")
    return 0


def _ordered_symbols(series, target: str, requested) -> list[str]:
    names = [s.symbol for s in series]
    if requested:
        return list(requested)
    if target not in names:
        raise DataError(f"target {target!r} not found in input (symbols: {names})")
    return [target] + [s for s in names if s != target]


def cmd_mi(args) -> int:
    series = load_prices(args.input)
    symbols = _ordered_symbols(series, args.target, args.symbols)
    panel = align_panel(series, symbols)
    m_values = [m for m in _parse_int_range(args.m) if m >= 1]
    n_values = [n for n in _parse_int_range(args.n) if n >= 1]
    if not m_values or not n_values:
        raise ConfigError("m and n ranges must contain positive values")
    if max(m_values) > len(panel.symbols):
        raise ConfigError(f"m up to {max(m_values)} exceeds {len(panel.symbols)} symbols")

    config = {
        "command": "mi",
        "input": args.input,
        "target": args.target,
        "symbols": list(panel.symbols),
        "m": args.m,
        "n": args.n,
        "shrinkage": args.shrinkage,
        "train_len": args.train_len,
        "test_len": args.test_len,
        "step": args.step,
    }
    full_rows = []
    window_rows = []
    for m in m_values:
        sub = align_panel(series, symbols[:m])
        if args.target not in sub.symbols:
            raise ConfigError(f"target {args.target!r} must be among the first {m} symbols")
        for n in n_values:
            dataset = lag_embed(sub, args.target, n)
            est = gaussian_mi(dataset.predictors, dataset.response, args.shrinkage)
            full_rows.append(
                {"m": m, "n": n, "mi_nats": est.nats, "mi_bits": est.bits}
            )
            try:
                splits = rolling_splits(
                    dataset.n_rows, args.train_len, args.test_len, args.step
                )
            except DataError:
                continue
            per_window = []
            for index, split in enumerate(splits):
                tr = slice(split.train_rows.start, split.train_rows.stop)
                te = slice(split.test_rows.start, split.test_rows.stop)
                train = gaussian_mi(
                    dataset.predictors[tr], dataset.response[tr], args.shrinkage
                )
                test = gaussian_mi(
                    dataset.predictors[te], dataset.response[te], args.shrinkage
                )
                per_window.append(
                    {"split": index, "train_nats": train.nats, "test_nats": test.nats}
                )
            avg_train = float(np.mean([w["train_nats"] for w in per_window]))
            avg_test = float(np.mean([w["test_nats"] for w in per_window]))
            window_rows.append(
                {
                    "m": m,
                    "n": n,
                    "avg_train_mi_nats": avg_train,
                    "avg_train_mi_bits": nats_to_bits(avg_train),
                    "avg_test_mi_nats": avg_test,
                    "avg_test_mi_bits": nats_to_bits(avg_test),
                    "windows": per_window,
                }
            )
    doc = {"config": config, "full": full_rows, "rolling": window_rows}
    _atomic_write(args.out, json.dumps(doc, indent=2) + "\n")
    print(f"wrote MI summary for {len(full_rows)} (m, n) cells to {args.out}")
    return 0


def cmd_acf(args) -> int:
    series = load_prices(args.input)
    by_name = {s.symbol: s for s in series}
    if args.symbol not in by_name:
        raise DataError(f"symbol {args.symbol!r} not in input")
    _, returns = log_returns(by_name[args.symbol])
    result = compute_acf(returns, args.max_lag)
    config = {
        "command": "acf",
        "input": args.input,
        "symbol": args.symbol,
        "max_lag": args.max_lag,
    }
    rows = list(zip(result.lags.tolist(), result.values.tolist()))
    _atomic_write(args.out, _csv_text(config, ("lag", "acf"), rows))
    print(f"wrote {len(rows)} ACF rows to {args.out}")
    return 0


def cmd_hartley(args) -> int:
    k_values = sorted(set(_parse_int_range(args.k)))
    if k_values[0] < 1:
        raise ConfigError("k values must be >= 1")
    if args.n_samples < max(k_values):
        raise ConfigError("n-samples must be at least the largest k")
    if args.sigma <= 0:
        raise ConfigError("sigma must be positive")
    sample_rng = np.random.Generator(
        np.random.Philox(key=np.array([args.seed & _UINT64_MASK, 1 << 62], dtype=np.uint64))
    )
    sample = sample_rng.normal(0.0, args.sigma, size=args.n_samples)
    entropy = gaussian_entropy_from_sample(sample)
    rows = []
    for k in k_values:
        est = hartley_value_estimate(sample, k, restarts=args.restarts, seed=args.seed)
        rows.append(
            (k, est.info_nats, est.u_value, utility_at_info(est.info_nats, entropy))
        )
    config = {
        "command": "hartley",
        "k": args.k,
        "n_samples": args.n_samples,
        "sigma": args.sigma,
        "restarts": args.restarts,
        "seed": args.seed,
        "sample_entropy_nats": float(entropy),
    }
    _atomic_write(
        args.out, _csv_text(config, ("k", "info_nats", "u_hartley", "u_shannon"), rows)
    )
    print(f"wrote {len(rows)} partition-value rows to {args.out}")
    return 0


def cmd_synth(args) -> int:
    spec = SynthSpec(
        kind=args.kind,
        length=args.length,
        n_symbols=args.n_symbols,
        rho=args.rho,
        phi=args.phi,
        noise_scale=args.noise_scale,
        seed=args.seed,
    )
    series = generate(spec)
    _atomic_write(args.out, prices_to_csv_text(series, spec_to_config(spec)))
    total = sum(len(s.close) for s in series)
    print(f"wrote {total} price rows ({len(series)} symbols) to {args.out}")
    return 0


def _load_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    return doc


_BACKTEST_DEFAULTS = {
    "input": None,
    "target": None,
    "symbols": None,
    "m_range": "1:5",
    "n_range": "2:20",
    "models": "lm,pls,nn",
    "train_len": 100,
    "test_len": 25,
    "step": 25,
    "epochs": 30,
    "hidden_units": 3,
    "learning_rate": 0.05,
    "batch_size": 16,
    "pls_components": 3,
    "shrinkage": 0.01,
    "master_seed": 0,
    "out_dir": "voikit-out",
    "units": "bits",
}


def _resolve_backtest_config(args) -> dict:
    config = dict(_BACKTEST_DEFAULTS)
    if args.config:
        file_cfg = _load_config_file(args.config)
        unknown = set(file_cfg) - set(config)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        config.update(file_cfg)
    env_out = os.environ.get(OUT_DIR_ENV)
    if env_out:
        config["out_dir"] = env_out
    for key in config:
        flag = getattr(args, key, None)
        if flag is not None:
            config[key] = flag
    if isinstance(config["models"], str):
        config["models"] = [m.strip() for m in config["models"].split(",") if m.strip()]
    if isinstance(config["symbols"], str):
        config["symbols"] = [s.strip() for s in config["symbols"].split(",") if s.strip()]
    for key in ("m_range", "n_range"):
        if isinstance(config[key], str):
            config[key] = _parse_int_range(config[key])
        elif isinstance(config[key], list) and len(config[key]) == 2:
            lo, hi = config[key]
            config[key] = list(range(int(lo), int(hi) + 1))
    if config["input"] is None:
        raise ConfigError("an input CSV is required (--input or config file)")
    if config["target"] is None:
        raise ConfigError("a target symbol is required (--target or config file)")
    if config["units"] not in ("bits", "nats"):
        raise ConfigError(f"units must be bits or nats, got {config['units']!r}")
    return config


def cmd_backtest(args) -> int:
    config = _resolve_backtest_config(args)
    series = load_prices(config["input"])
    symbols = _ordered_symbols(series, config["target"], config["symbols"])
    panel = align_panel(series, symbols)
    train_config = TrainConfig(
        epochs=config["epochs"],
        hidden_units=config["hidden_units"],
        learning_rate=config["learning_rate"],
        batch_size=config["batch_size"],
        seed=config["master_seed"],
    )
    report = run_sweep(
        panel,
        config["target"],
        m_range=config["m_range"],
        n_range=config["n_range"],
        models=config["models"],
        train_config=train_config,
        window_config=WindowConfig(
            train_len=config["train_len"],
            test_len=config["test_len"],
            step=config["step"],
        ),
        shrinkage=config["shrinkage"],
        master_seed=config["master_seed"],
        pls_components=config["pls_components"],
    )
    doc = report_to_dict(report)
    doc["config"].update({"input": config["input"], "units": config["units"]})

    out_dir = config["out_dir"]
    report_path = os.path.join(out_dir, "report.json")
    overlay_path = os.path.join(out_dir, "overlay.csv")
    _atomic_write(report_path, json.dumps(doc, indent=2) + "\n")
    header = (
        "m", "n", "model", "mi_nats", "mi_bits", "avg_rmse_test",
        "frontier_rmse_train_sigma", "frontier_rmse_test_sigma", "avg_corr", "avg_mrr",
    )
    rows = [tuple(row[key] for key in header) for row in report.overlay]
    _atomic_write(overlay_path, _csv_text(doc["config"], header, rows))

    unit = config["units"]
    convert = (lambda v: v) if unit == "nats" else nats_to_bits
    infos = [row["mi_nats"] for row in report.overlay if row["mi_nats"] is not None]
    if infos:
        print(
            f"swept {len(report.cells)} cells; avg train MI "
            f"{convert(float(np.mean(infos))):.4f} {unit}"
        )
    print(f"wrote {report_path} and {overlay_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voikit",
        description="Information/performance frontiers for mean-square forecasting.",
    )
    parser.add_argument("--version", action="version", version=f"voikit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frontier", help="sample the theoretical RMSE(I) frontier")
    p.add_argument("--sigma", type=float, help="Gaussian response standard deviation")
    p.add_argument("--entropy", type=float, help="differential entropy in nats")
    p.add_argument("--grid", default="0:3:0.1", help="info grid start:stop:step in nats")
    p.add_argument("--units", choices=("bits", "nats"), default="bits")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_frontier)

    p = sub.add_parser("mi", help="estimate mutual information from a price CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--symbols", type=lambda s: [x.strip() for x in s.split(",")])
    p.add_argument("--m", default="1", help="symbol counts, e.g. 2 or 1:5")
    p.add_argument("--n", default="1", help="lag counts, e.g. 3 or 2:20")
    p.add_argument("--shrinkage", type=float, default=0.01)
    p.add_argument("--train-len", type=int, default=100)
    p.add_argument("--test-len", type=int, default=25)
    p.add_argument("--step", type=int, default=25)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_mi)

    p = sub.add_parser("acf", help="autocorrelation of a symbol's log-returns")
    p.add_argument("--input", required=True)
    p.add_argument("--symbol", required=True)
    p.add_argument("--max-lag", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_acf)

    p = sub.add_parser("backtest", help="run the full sweep and emit report files")
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--input")
    p.add_argument("--target")
    p.add_argument("--symbols")
    p.add_argument("--m-range", dest="m_range")
    p.add_argument("--n-range", dest="n_range")
    p.add_argument("--models")
    p.add_argument("--train-len", dest="train_len", type=int)
    p.add_argument("--test-len", dest="test_len", type=int)
    p.add_argument("--step", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--hidden-units", dest="hidden_units", type=int)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--pls-components", dest="pls_components", type=int)
    p.add_argument("--shrinkage", type=float)
    p.add_argument("--master-seed", dest="master_seed", type=int)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--units", choices=("bits", "nats"))
    p.set_defaults(handler=cmd_backtest)

    p = sub.add_parser("hartley", help="partition-value estimates vs the Shannon frontier")
    p.add_argument("--k", default="1:8", help="partition sizes, e.g. 4 or 1:8")
    p.add_argument("--n-samples", dest="n_samples", type=int, default=100_000)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_hartley)

    p = sub.add_parser("synth", help="generate a synthetic price CSV")
    p.add_argument("--kind", choices=("ar1_panel", "gaussian_channel"), default="ar1_panel")
    p.add_argument("--length", type=int, default=701)
    p.add_argument("--n-symbols", dest="n_symbols", type=int, default=5)
    p.add_argument("--rho", type=float, default=0.6)
    p.add_argument("--phi", type=float, default=0.5)
    p.add_argument("--noise-scale", dest="noise_scale", type=float, default=0.03)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

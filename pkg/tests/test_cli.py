"""CLI subcommands: file contracts, unit handling, overrides, exit codes."""

import csv
import json
import math
import os

import pytest

from voikit.cli import main


def read_csv(path):
    with open(path, encoding="utf-8") as handle:
        comments = []
        rows = []
        for line in handle:
            if line.startswith("#"):
                comments.append(line)
            else:
                rows.append(line)
    return comments, list(csv.reader(rows))


@pytest.fixture()
def panel_csv(tmp_path):
    path = tmp_path / "panel.csv"
    rc = main(
        ["synth", "--kind", "ar1_panel", "--length", "200", "--n-symbols", "2",
         "--seed", "3", "--out", str(path)]
    )
    assert rc == 0
    return str(path)


class TestFrontierCommand:
    def test_nats_grid(self, tmp_path):
        out = tmp_path / "frontier.csv"
        rc = main(["frontier", "--sigma", "1", "--grid", "0:3:0.5", "--units", "nats",
                   "--out", str(out)])
        assert rc == 0
        comments, rows = read_csv(out)
        assert comments and "config" in comments[0]
        assert rows[0] == ["info", "u", "v", "rmse"]
        assert len(rows) == 1 + 7
        assert float(rows[1][3]) == pytest.approx(1.0)
        assert float(rows[1][0]) == 0.0

    def test_bits_scales_info_column_only(self, tmp_path):
        nats_out = tmp_path / "nats.csv"
        bits_out = tmp_path / "bits.csv"
        main(["frontier", "--sigma", "1", "--grid", "0:3:0.5", "--units", "nats", "--out", str(nats_out)])
        main(["frontier", "--sigma", "1", "--grid", "0:3:0.5", "--units", "bits", "--out", str(bits_out)])
        _, nats_rows = read_csv(nats_out)
        _, bits_rows = read_csv(bits_out)
        for nrow, brow in zip(nats_rows[1:], bits_rows[1:]):
            assert float(brow[0]) == pytest.approx(float(nrow[0]) / math.log(2.0), abs=1e-12)
            assert brow[1:] == nrow[1:]

    def test_entropy_source(self, tmp_path):
        out = tmp_path / "frontier.csv"
        rc = main(["frontier", "--entropy", "1.4189385332046727", "--grid", "0:1:1",
                   "--units", "nats", "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        assert float(rows[1][3]) == pytest.approx(1.0, rel=1e-10)

    def test_requires_exactly_one_source(self, tmp_path):
        assert main(["frontier", "--out", str(tmp_path / "x.csv")]) == 2
        assert (
            main(["frontier", "--sigma", "1", "--entropy", "0", "--out", str(tmp_path / "x.csv")])
            == 2
        )


class TestMiCommand:
    def test_channel_recovers_oracle(self, tmp_path):
        chan = tmp_path / "chan.csv"
        assert main(["synth", "--kind", "gaussian_channel", "--length", "20001",
                     "--rho", "0.6", "--noise-scale", "0.02", "--seed", "5",
                     "--out", str(chan)]) == 0
        out = tmp_path / "mi.json"
        rc = main(["mi", "--input", str(chan), "--target", "TGT", "--m", "2", "--n", "2",
                   "--shrinkage", "0.0", "--out", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        cell = doc["full"][0]
        assert cell["mi_nats"] == pytest.approx(0.22314355131420976, rel=0.05)
        assert cell["mi_bits"] == pytest.approx(cell["mi_nats"] / math.log(2.0), rel=1e-12)
        assert doc["config"]["target"] == "TGT"
        assert doc["rolling"][0]["windows"]  # per-window values present

    def test_independent_panel_near_zero(self, tmp_path):
        white = tmp_path / "white.csv"
        assert main(["synth", "--kind", "ar1_panel", "--phi", "0.0", "--length", "400",
                     "--n-symbols", "2", "--seed", "8", "--out", str(white)]) == 0
        out = tmp_path / "mi.json"
        rc = main(["mi", "--input", str(white), "--target", "BTC/USD",
                   "--m", "2", "--n", "2", "--out", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        # returns are i.i.d., so only small-sample bias (~p/2N) remains
        assert doc["full"][0]["mi_nats"] <= 0.05

    def test_round_trips_through_schema(self, panel_csv, tmp_path):
        out = tmp_path / "mi.json"
        assert main(["mi", "--input", panel_csv, "--target", "BTC/USD",
                     "--m", "1:2", "--n", "2:3", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert {(c["m"], c["n"]) for c in doc["full"]} == {(1, 2), (1, 3), (2, 2), (2, 3)}
        rebuilt = json.loads(json.dumps(doc))
        assert rebuilt == doc


class TestAcfCommand:
    def test_lag_zero_row(self, panel_csv, tmp_path):
        out = tmp_path / "acf.csv"
        rc = main(["acf", "--input", panel_csv, "--symbol", "BTC/USD", "--max-lag", "5",
                   "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        assert rows[0] == ["lag", "acf"]
        assert float(rows[1][1]) == 1.0
        assert len(rows) == 1 + 6

    def test_ar1_lag_one(self, tmp_path):
        path = tmp_path / "long.csv"
        main(["synth", "--kind", "ar1_panel", "--length", "60000", "--n-symbols", "1",
              "--phi", "0.5", "--seed", "4", "--out", str(path)])
        out = tmp_path / "acf.csv"
        assert main(["acf", "--input", str(path), "--symbol", "BTC/USD", "--max-lag", "1",
                     "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert float(rows[2][1]) == pytest.approx(0.5, abs=0.02)

    def test_unknown_symbol_is_data_error(self, panel_csv, tmp_path):
        assert main(["acf", "--input", panel_csv, "--symbol", "NOPE",
                     "--out", str(tmp_path / "x.csv")]) == 3


class TestHartleyCommand:
    def test_rows_and_dominance(self, tmp_path):
        out = tmp_path / "hartley.csv"
        rc = main(["hartley", "--k", "1:2", "--n-samples", "20000", "--sigma", "1",
                   "--restarts", "3", "--seed", "0", "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        assert rows[0] == ["k", "info_nats", "u_hartley", "u_shannon"]
        k1, k2 = rows[1], rows[2]
        assert float(k1[2]) == pytest.approx(-0.5, abs=0.02)
        assert float(k1[3]) == pytest.approx(-0.5, abs=0.02)
        assert float(k2[2]) == pytest.approx(-0.1817, abs=0.01)
        assert float(k2[3]) == pytest.approx(-0.125, abs=0.01)
        # dominance with slack for the k=1 degrees-of-freedom difference
        for row in rows[1:]:
            assert float(row[2]) <= float(row[3]) + 1e-3

    def test_sample_too_small(self, tmp_path):
        assert main(["hartley", "--k", "8", "--n-samples", "4",
                     "--out", str(tmp_path / "x.csv")]) == 2


class TestSynthCommand:
    def test_byte_identical_reruns(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for out in (a, b):
            assert main(["synth", "--kind", "ar1_panel", "--length", "100",
                         "--seed", "9", "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_positive_prices(self, tmp_path):
        out = tmp_path / "p.csv"
        main(["synth", "--kind", "ar1_panel", "--length", "701", "--n-symbols", "5",
              "--seed", "0", "--out", str(out)])
        _, rows = read_csv(out)
        assert len(rows) == 1 + 701 * 5
        assert all(float(r[2]) > 0 for r in rows[1:])

    def test_invalid_spec(self, tmp_path):
        assert main(["synth", "--kind", "ar1_panel", "--phi", "1.5",
                     "--out", str(tmp_path / "x.csv")]) == 2


class TestBacktestCommand:
    def test_end_to_end_with_config_file(self, panel_csv, tmp_path):
        out_dir = tmp_path / "bt"
        config = {
            "input": panel_csv,
            "target": "BTC/USD",
            "m_range": [1, 2],
            "n_range": [2, 3],
            "models": ["lm", "pls"],
            "master_seed": 11,
            "out_dir": str(out_dir),
        }
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps(config))
        assert main(["backtest", "--config", str(config_path)]) == 0
        report = json.loads((out_dir / "report.json").read_text())
        assert report["config"]["master_seed"] == 11
        assert report["config"]["input"] == panel_csv
        assert len(report["cells"]) == 8
        comments, rows = read_csv(out_dir / "overlay.csv")
        assert comments and "master_seed" in comments[0]
        assert rows[0][0:3] == ["m", "n", "model"]
        assert len(rows) == 1 + 8

    def test_flag_overrides_config(self, panel_csv, tmp_path):
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({
            "input": panel_csv, "target": "BTC/USD",
            "m_range": [1, 1], "n_range": [2, 2], "models": ["lm"],
            "out_dir": str(tmp_path / "from_config"),
        }))
        flag_dir = tmp_path / "from_flag"
        assert main(["backtest", "--config", str(config_path),
                     "--out-dir", str(flag_dir)]) == 0
        assert (flag_dir / "report.json").exists()
        assert not (tmp_path / "from_config").exists()

    def test_env_var_overrides_config(self, panel_csv, tmp_path, monkeypatch):
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({
            "input": panel_csv, "target": "BTC/USD",
            "m_range": [1, 1], "n_range": [2, 2], "models": ["lm"],
            "out_dir": str(tmp_path / "from_config"),
        }))
        env_dir = tmp_path / "from_env"
        monkeypatch.setenv("VOIKIT_OUT_DIR", str(env_dir))
        assert main(["backtest", "--config", str(config_path)]) == 0
        assert (env_dir / "report.json").exists()

    def test_byte_identical_reruns(self, panel_csv, tmp_path):
        out_dir = tmp_path / "bt"
        args = ["backtest", "--input", panel_csv, "--target", "BTC/USD",
                "--m-range", "1:2", "--n-range", "2:2", "--models", "lm,nn",
                "--master-seed", "4", "--out-dir", str(out_dir)]
        assert main(args) == 0
        first = (out_dir / "report.json").read_bytes(), (out_dir / "overlay.csv").read_bytes()
        assert main(args) == 0
        second = (out_dir / "report.json").read_bytes(), (out_dir / "overlay.csv").read_bytes()
        assert first == second

    def test_unknown_config_key(self, panel_csv, tmp_path):
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({"input": panel_csv, "target": "BTC/USD",
                                           "bogus": 1}))
        assert main(["backtest", "--config", str(config_path)]) == 2

    def test_missing_input_is_config_error(self):
        assert main(["backtest", "--target", "BTC/USD"]) == 2


class TestExitCodes:
    def test_config_error(self, tmp_path):
        assert main(["frontier", "--sigma", "1", "--grid", "5:1:1",
                     "--out", str(tmp_path / "x.csv")]) == 2

    def test_data_error(self, tmp_path):
        assert main(["mi", "--input", str(tmp_path / "missing.csv"), "--target", "T",
                     "--out", str(tmp_path / "x.json")]) == 3

    def test_numerical_error(self, panel_csv, tmp_path):
        # duplicate the target column so the joint covariance is singular
        lines = open(panel_csv, encoding="utf-8").read().splitlines()
        body = [l for l in lines if not l.startswith("#")]
        dup = body + [l.replace("BTC/USD", "COPY") for l in body[1:] if ",BTC/USD," in l]
        dup_path = tmp_path / "dup.csv"
        dup_path.write_text("\n".join(dup) + "\n")
        rc = main(["mi", "--input", str(dup_path), "--target", "BTC/USD",
                   "--symbols", "BTC/USD,COPY", "--m", "2", "--n", "2",
                   "--shrinkage", "0.0", "--out", str(tmp_path / "x.json")])
        assert rc == 4

    def test_no_partial_output_on_failure(self, tmp_path):
        out = tmp_path / "x.csv"
        assert main(["hartley", "--k", "8", "--n-samples", "4", "--out", str(out)]) == 2
        assert not out.exists()
        assert not any(p.name.startswith(".voikit-") for p in tmp_path.iterdir())
